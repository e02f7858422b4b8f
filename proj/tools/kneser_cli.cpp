#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <kneser/kneser.hpp>

namespace {

using namespace kneser;

struct Options {
    std::string family_path;
    std::vector<int> complete;
    std::string coloring_path;
    int s = 1;
    int r = 0;
    int p = 0;
    int r1 = 2, r2 = 2, s2 = 2;
    std::string variant = "almost";
    std::string format = "json";
    std::string kind = "exhaustive";
    std::string check = "thm1";
    int n = 0;
    int max_members = 5;
    long long count = 100;
    std::uint64_t seed = 0;
    long long budget = 1'000'000;
    bool exploratory = false;
    int jobs = 1;
    bool timings = false;
};

void add_family_options(CLI::App* cmd, Options& o) {
    auto* fam = cmd->add_option("--family", o.family_path, "Family JSON file");
    auto* comp = cmd->add_option("--complete", o.complete, "All k-subsets of [n]: --complete n k")
                     ->expected(2);
    fam->excludes(comp);
    comp->excludes(fam);
}

void add_format_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "Output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--timings", o.timings, "Emit measured wall times instead of 0.000");
}

StabilityMode parse_variant(const std::string& v) {
    if (v == "almost") return StabilityMode::almost;
    if (v == "cyclic") return StabilityMode::cyclic;
    throw PreconditionError("variant must be almost or cyclic, got " + v);
}

Family load_family(const Options& o, std::string* spec_out) {
    if (!o.complete.empty()) {
        *spec_out = "complete:" + std::to_string(o.complete[0]) + ":" +
                    std::to_string(o.complete[1]);
        return complete_k_family(o.complete[0], o.complete[1]);
    }
    if (o.family_path.empty())
        throw PreconditionError("exactly one family source required: --family or --complete");
    std::ifstream in(o.family_path);
    if (!in) throw PreconditionError("cannot open family file " + o.family_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    *spec_out = "file:" + o.family_path;
    Family f = family_from_json(parse_json(buf.str(), o.family_path));
    if (f.empty())
        throw PreconditionError(o.family_path + ": family has no sets");
    return f;
}

Coloring load_coloring(const std::string& path, const Family& over) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open coloring file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return coloring_from_json(over, parse_json(buf.str(), path));
}

double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

void emit_bound_report(const BoundReport& rep, const Options& o) {
    if (o.format == "csv") {
        std::cout << csv_header() << "\n" << bound_report_to_csv(rep, o.timings) << "\n";
        return;
    }
    json j = bound_report_to_json(rep, o.timings);
    j["schema"] = 1;
    emit(j);
}

int run_ecd(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    std::string spec;
    Family f = load_family(o, &spec);
    int r = o.r == 0 ? 2 : o.r;
    EcdResult res = ecd(f, r);
    json j = certificate_to_json(res.certificate);
    j["schema"] = 1;
    j["family_spec"] = spec;
    j["n"] = f.ground_size();
    j["r"] = r;
    j["seconds"] = format_seconds(elapsed(start), o.timings);
    emit(j);
    return 0;
}

int run_chi(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    std::string spec;
    Family f = load_family(o, &spec);
    int r = o.r == 0 ? 2 : o.r;
    StabilityMode variant = parse_variant(o.variant);
    Family sub = stable_subfamily(f, o.s, variant);
    ChiResult res = chromatic_number(sub, r);
    json j{{"schema", 1},
           {"family_spec", spec},
           {"n", f.ground_size()},
           {"s", o.s},
           {"r", r},
           {"variant", o.variant},
           {"vertices", sub.size()},
           {"chi", res.chi},
           {"witness", coloring_to_json(sub, res.witness)},
           {"seconds", format_seconds(elapsed(start), o.timings)}};
    emit(j);
    return 0;
}

int run_stable(const Options& o) {
    std::string spec;
    Family f = load_family(o, &spec);
    StabilityMode variant = parse_variant(o.variant);
    Family sub = stable_subfamily(f, o.s, variant);
    json j = family_to_json(sub);
    j["schema"] = 1;
    j["family_spec"] = spec;
    j["s"] = o.s;
    j["variant"] = o.variant;
    j["count"] = sub.size();
    emit(j);
    return 0;
}

int run_thm1(const Options& o) {
    std::string spec;
    Family f = load_family(o, &spec);
    emit_bound_report(thm1_check(f, o.s, o.r, spec), o);
    return 0;
}

int run_thm2(const Options& o) {
    std::string spec;
    Family f = load_family(o, &spec);
    if (o.p < 2) throw PreconditionError("thm2 requires --p (a prime)");
    emit_bound_report(thm2_check(f, o.s, o.p, spec), o);
    return 0;
}

int run_conjecture(const Options& o) {
    std::string spec;
    Family f = load_family(o, &spec);
    if (o.r < 2) throw PreconditionError("conjecture requires --r >= 2");
    emit_bound_report(conjecture_check(f, o.s, o.r, parse_variant(o.variant), o.exploratory, spec),
                      o);
    return 0;
}

int run_scan(const Options& o) {
    if (o.n < 1) throw PreconditionError("scan requires --n >= 1");
    if (o.r >= 2 && o.p >= 2)
        throw PreconditionError("scan takes --r or --p, not both");
    int r_or_p = o.r >= 2 ? o.r : o.p;
    if (r_or_p < 2) throw PreconditionError("scan requires --r or --p");
    BoundCheck check;
    if (o.check == "thm1") check = BoundCheck::thm1;
    else if (o.check == "thm2") check = BoundCheck::thm2;
    else if (o.check == "conjecture") check = BoundCheck::conjecture;
    else throw PreconditionError("scan --check must be thm1, thm2 or conjecture");

    ScanSpec spec;
    spec.kind = o.kind;
    spec.n = o.n;
    spec.max_members = o.max_members;
    spec.count = o.count;
    spec.seed = o.seed;
    ScanResult res = counterexample_scan(spec, o.s, r_or_p, parse_variant(o.variant), check,
                                         o.budget, o.exploratory, o.jobs);
    if (o.format == "csv") {
        std::cout << csv_header() << "\n";
        for (const BoundReport& rep : res.failures)
            std::cout << bound_report_to_csv(rep, o.timings) << "\n";
        std::cerr << "scanned=" << res.scanned << " failures=" << res.failures.size()
                  << " complete=" << (res.complete ? "true" : "false") << "\n";
    } else {
        for (const BoundReport& rep : res.failures) {
            json j = bound_report_to_json(rep, o.timings);
            j["schema"] = 1;
            emit(j);
        }
        emit(json{{"schema", 1},
                  {"scanned", res.scanned},
                  {"failures", res.failures.size()},
                  {"complete", res.complete}});
    }
    return 0;
}

int run_tucker_audit(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    std::string spec;
    Family f = load_family(o, &spec);
    check_z2_enumeration_guard(f.ground_size());
    TuckerZ2Context ctx =
        o.coloring_path.empty()
            ? make_tucker_z2_context(f, o.s)
            : make_tucker_z2_context(
                  f, o.s,
                  load_coloring(o.coloring_path,
                                stable_subfamily(f, o.s, StabilityMode::almost)));
    AuditReport rep = audit_tucker_z2(ctx);
    json j = audit_report_to_json(rep);
    j["schema"] = 1;
    j["family_spec"] = spec;
    j["n"] = f.ground_size();
    j["s"] = o.s;
    j["t"] = ctx.t;
    j["seconds"] = format_seconds(elapsed(start), o.timings);
    emit(j);
    return 0;
}

int run_zptucker_audit(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    std::string spec;
    Family f = load_family(o, &spec);
    if (o.p < 2) throw PreconditionError("zptucker-audit requires --p (a prime)");
    check_zp_enumeration_guard(f.ground_size(), o.p);
    ZpTuckerContext ctx =
        o.coloring_path.empty()
            ? make_zp_tucker_context(f, o.s, o.p)
            : make_zp_tucker_context(
                  f, o.s, o.p,
                  load_coloring(o.coloring_path,
                                stable_subfamily(f, o.s, StabilityMode::almost)));
    AuditReport rep = audit_zptucker(ctx);
    json j = audit_report_to_json(rep);
    j["schema"] = 1;
    j["family_spec"] = spec;
    j["n"] = f.ground_size();
    j["s"] = o.s;
    j["p"] = o.p;
    j["t"] = ctx.t;
    j["alpha1"] = ctx.alpha1;
    j["alpha2"] = ctx.alpha2;
    j["seconds"] = format_seconds(elapsed(start), o.timings);
    emit(j);
    return 0;
}

int run_lemma_witness(const Options& o) {
    auto start = std::chrono::steady_clock::now();
    std::string spec;
    Family f = load_family(o, &spec);
    check_lemma_ground_guard(f.ground_size());
    Family sub = stable_subfamily(f, o.r1 * o.s2, StabilityMode::almost);
    Coloring coloring;
    if (o.coloring_path.empty()) {
        coloring = chromatic_number(sub, o.r1 * o.r2).witness;
    } else {
        coloring = load_coloring(o.coloring_path, sub);
    }
    LemmaWitnessReport rep = lemma_compose_witness(f, o.r1, o.r2, o.s2, coloring.t, coloring);
    json j = lemma_report_to_json(rep);
    j["schema"] = 1;
    j["family_spec"] = spec;
    j["n"] = f.ground_size();
    j["seconds"] = format_seconds(elapsed(start), o.timings);
    emit(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solvers and bound audits for Kneser hypergraphs of set families"};
    app.require_subcommand(1);
    Options o;

    auto* ecd_cmd = app.add_subcommand("ecd", "Equitable r-colorability defect with certificate");
    add_family_options(ecd_cmd, o);
    ecd_cmd->add_option("--r", o.r, "Number of equitable parts");
    add_format_options(ecd_cmd, o);

    auto* chi_cmd = app.add_subcommand("chi", "Exact chromatic number of KG^r of a subfamily");
    add_family_options(chi_cmd, o);
    chi_cmd->add_option("--s", o.s, "Stability parameter (1 keeps the whole family)");
    chi_cmd->add_option("--r", o.r, "Edge arity");
    chi_cmd->add_option("--variant", o.variant, "Stability variant: almost|cyclic");
    add_format_options(chi_cmd, o);

    auto* stable_cmd = app.add_subcommand("stable", "Filter a family to its stable members");
    add_family_options(stable_cmd, o);
    stable_cmd->add_option("--s", o.s, "Stability parameter")->required();
    stable_cmd->add_option("--variant", o.variant, "Stability variant: almost|cyclic");

    auto* thm1_cmd = app.add_subcommand("thm1", "Defect lower bound check (r a power of 2)");
    add_family_options(thm1_cmd, o);
    thm1_cmd->add_option("--s", o.s, "Stability parameter (multiple of r)")->required();
    thm1_cmd->add_option("--r", o.r, "Edge arity (power of 2)")->required();
    add_format_options(thm1_cmd, o);

    auto* thm2_cmd = app.add_subcommand("thm2", "Prime-arity lower bound check");
    add_family_options(thm2_cmd, o);
    thm2_cmd->add_option("--s", o.s, "Stability parameter")->required();
    thm2_cmd->add_option("--p", o.p, "Edge arity (prime)")->required();
    add_format_options(thm2_cmd, o);

    auto* conj_cmd = app.add_subcommand("conjecture", "General-arity bound check (s >= r)");
    add_family_options(conj_cmd, o);
    conj_cmd->add_option("--s", o.s, "Stability parameter")->required();
    conj_cmd->add_option("--r", o.r, "Edge arity")->required();
    conj_cmd->add_option("--variant", o.variant, "Stability variant: almost|cyclic");
    conj_cmd->add_flag("--exploratory", o.exploratory, "Allow s < r (recorded in the report)");
    add_format_options(conj_cmd, o);

    auto* scan_cmd = app.add_subcommand("scan", "Bound checks over generated families");
    scan_cmd->add_option("--kind", o.kind, "Generator: exhaustive|random")
        ->check(CLI::IsMember({"exhaustive", "random"}));
    scan_cmd->add_option("--n", o.n, "Ground set size")->required();
    scan_cmd->add_option("--max-members", o.max_members, "Family size cap");
    scan_cmd->add_option("--count", o.count, "Number of random samples");
    scan_cmd->add_option("--seed", o.seed, "Random generator seed");
    scan_cmd->add_option("--s", o.s, "Stability parameter")->required();
    scan_cmd->add_option("--r", o.r, "Edge arity (thm1/conjecture)");
    scan_cmd->add_option("--p", o.p, "Edge arity (thm2)");
    scan_cmd->add_option("--check", o.check, "Bound to check: thm1|thm2|conjecture");
    scan_cmd->add_option("--variant", o.variant, "Stability variant: almost|cyclic");
    scan_cmd->add_option("--budget", o.budget, "Maximum instances to check");
    scan_cmd->add_flag("--exploratory", o.exploratory, "Allow s < r instances");
    scan_cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_format_options(scan_cmd, o);

    auto* tucker_cmd = app.add_subcommand("tucker-audit", "Exhaustive audit of the Z2 labeling");
    add_family_options(tucker_cmd, o);
    tucker_cmd->add_option("--s", o.s, "Stability parameter (even)")->required();
    tucker_cmd->add_option("--coloring", o.coloring_path,
                           "Coloring JSON for the stable subfamily (default: solve)");
    add_format_options(tucker_cmd, o);

    auto* zp_cmd = app.add_subcommand("zptucker-audit", "Exhaustive audit of the Zp labeling");
    add_family_options(zp_cmd, o);
    zp_cmd->add_option("--s", o.s, "Stability parameter")->required();
    zp_cmd->add_option("--p", o.p, "Prime arity")->required();
    zp_cmd->add_option("--coloring", o.coloring_path,
                       "Coloring JSON for the stable subfamily (default: solve)");
    add_format_options(zp_cmd, o);

    auto* lemma_cmd = app.add_subcommand("lemma-witness",
                                         "Coloring-composition construction with accounting");
    add_family_options(lemma_cmd, o);
    lemma_cmd->add_option("--r1", o.r1, "Outer arity")->required();
    lemma_cmd->add_option("--r2", o.r2, "Inner arity")->required();
    lemma_cmd->add_option("--s2", o.s2, "Inner stability parameter")->required();
    lemma_cmd->add_option("--coloring", o.coloring_path,
                          "Coloring JSON for the (r1*s2)-stable subfamily (default: solve)");
    add_format_options(lemma_cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(ecd_cmd)) return run_ecd(o);
        if (app.got_subcommand(chi_cmd)) return run_chi(o);
        if (app.got_subcommand(stable_cmd)) return run_stable(o);
        if (app.got_subcommand(thm1_cmd)) return run_thm1(o);
        if (app.got_subcommand(thm2_cmd)) return run_thm2(o);
        if (app.got_subcommand(conj_cmd)) return run_conjecture(o);
        if (app.got_subcommand(scan_cmd)) return run_scan(o);
        if (app.got_subcommand(tucker_cmd)) return run_tucker_audit(o);
        if (app.got_subcommand(zp_cmd)) return run_zptucker_audit(o);
        if (app.got_subcommand(lemma_cmd)) return run_lemma_witness(o);
        throw kneser::PreconditionError("no subcommand given");
    } catch (const kneser::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const kneser::GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return 2;
    } catch (const kneser::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
