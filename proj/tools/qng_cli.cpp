// Command-line front end: bound curves, loss thresholds, witness curves and
// Poisson error bars, all written as CSV.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qng/error_model.hpp"
#include "qng/witnesses.hpp"

using namespace qng;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Real parse_real(const std::string& text)
{
    std::istringstream is(text);
    is.imbue(std::locale::classic());
    Real v;
    if (!(is >> v) || !(is >> std::ws).eof()) throw UsageError("not a number: '" + text + "'");
    return v;
}

/// `lo..hi` sampled every `step` (the last point is hi when it lies on the
/// grid up to rounding), or a single value.
std::vector<Real> parse_range(const std::string& text, Real step)
{
    const auto dots = text.find("..");
    if (dots == std::string::npos) return {parse_real(text)};
    const Real lo = parse_real(text.substr(0, dots));
    const Real hi = parse_real(text.substr(dots + 2));
    if (!(step > 0)) throw UsageError("range step must be > 0");
    if (hi < lo) throw UsageError("range '" + text + "' is empty");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9L));
    std::vector<Real> out;
    for (long i = 0; i <= count; ++i) out.push_back(std::min(hi, lo + i * step));
    return out;
}

std::vector<Real> parse_list(const std::string& text)
{
    std::vector<Real> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(item));
    if (out.empty()) throw UsageError("empty value list");
    return out;
}

std::vector<Real> parse_s_list(const std::string& text)
{
    auto out = parse_list(text);
    for (Real s : out) SParam{s};
    return out;
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

Criterion parse_criterion(const std::string& c) { return c == "a" ? Criterion::a : Criterion::b; }

struct FamilyArgs {
    std::string family = "fock";
    std::string m, alpha, r;
    Real param_step = 0.1L;

    std::vector<StateFamily> members() const
    {
        std::vector<StateFamily> out;
        if (family == "vacuum") return {VacuumFamily{}};
        if (family == "fock") {
            if (m.empty()) throw UsageError("--family fock needs --m");
            for (Real v : parse_range(m, 1)) {
                if (v < 0 || v != std::floor(v)) throw UsageError("--m must be a non-negative integer");
                out.push_back(FockFamily{static_cast<int>(v)});
            }
        } else if (family == "pac") {
            if (alpha.empty()) throw UsageError("--family pac needs --alpha");
            for (Real v : parse_range(alpha, param_step)) out.push_back(PacFamily{v});
        } else {
            if (r.empty()) throw UsageError("--family pss needs --r");
            for (Real v : parse_range(r, param_step)) {
                if (v < 0) throw UsageError("--r must be >= 0");
                out.push_back(PssFamily{v});
            }
        }
        return out;
    }
};

void add_family_options(CLI::App* cmd, FamilyArgs& fa, bool with_vacuum)
{
    std::vector<std::string> names{"fock", "pac", "pss"};
    if (with_vacuum) names.push_back("vacuum");
    cmd->add_option("--family", fa.family, "State family")->check(CLI::IsMember(names))->capture_default_str();
    cmd->add_option("--m", fa.m, "Fock number or range lo..hi");
    cmd->add_option("--alpha", fa.alpha, "PAC amplitude or range lo..hi");
    cmd->add_option("--r", fa.r, "PSS squeezing or range lo..hi");
}

constexpr int kMinCutoff = 2;
constexpr int kMaxCutoff = 400;

int default_cutoff()
{
    const char* env = std::getenv("QNG_DEFAULT_CUTOFF");
    if (!env || !*env) return 80;
    const Real v = parse_real(env);
    if (v != std::floor(v) || v < kMinCutoff || v > kMaxCutoff) {
        throw UsageError("QNG_DEFAULT_CUTOFF must be an integer in [2, 400]");
    }
    return static_cast<int>(v);
}

struct Common {
    int cutoff = default_cutoff();
    Real nbar_slack = 0;
    bool serial = false;
    std::string out = "-";

    Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
};

void add_common_options(CLI::App* cmd, Common& c, bool witness)
{
    cmd->add_option("--out,-o", c.out, "Output CSV path, '-' for stdout")->capture_default_str();
    cmd->add_flag("--serial", c.serial, "Use the serial reference path");
    if (!witness) return;
    cmd->add_option("--cutoff", c.cutoff, "Fock cutoff (default from QNG_DEFAULT_CUTOFF, else 80)")
        ->check(CLI::Range(kMinCutoff, kMaxCutoff))
        ->capture_default_str();
    cmd->add_option("--nbar-slack", c.nbar_slack, "Margin added to the measured mean photon number")
        ->check(CLI::NonNegativeNumber);
}

int run(int argc, char** argv)
{
    CLI::App app{"Quantum non-Gaussianity witnesses from quasiprobabilities at the phase-space origin"};
    app.require_subcommand(1);

    // bound-curve
    Common bc_common;
    std::string bc_s = "-1";
    Real bc_n_max = 10, bc_step = 0.05L;
    auto* bc = app.add_subcommand("bound-curve", "Pure-state hull bound B_s(n) on a uniform grid");
    bc->add_option("--s", bc_s, "Ordering parameter s <= 0")->capture_default_str();
    bc->add_option("--n-max", bc_n_max, "Largest mean photon number")->check(CLI::NonNegativeNumber);
    bc->add_option("--step", bc_step, "Grid step")->check(CLI::PositiveNumber);
    add_common_options(bc, bc_common, false);

    // threshold
    Common th_common;
    FamilyArgs th_family;
    std::string th_s = "0", th_criterion = "a";
    Real th_tol = 1e-5L;
    int th_scan = 50;
    bool th_no_refine = false;
    auto* th = app.add_subcommand("threshold", "Largest loss at which the witness stays conclusive");
    add_family_options(th, th_family, false);
    th->add_option("--step", th_family.param_step, "Step for real parameter ranges")->check(CLI::PositiveNumber);
    th->add_option("--s", th_s, "Comma-separated s values")->capture_default_str();
    th->add_option("--criterion", th_criterion, "a (no map) or b (Gaussian map)")->check(CLI::IsMember({"a", "b"}));
    th->add_option("--tol", th_tol, "Bisection tolerance")->check(CLI::Range(1e-6, 0.5));
    th->add_option("--scan-points", th_scan, "Loss grid points scanned before bisection")->check(CLI::PositiveNumber);
    th->add_flag("--no-refine", th_no_refine, "Criterion b: keep the analytic seed map");
    add_common_options(th, th_common, true);

    // witness-curve
    Common wc_common;
    FamilyArgs wc_family;
    std::string wc_s = "0", wc_eps = "0..1", wc_criterion = "a";
    Real wc_eps_step = 0.05L;
    bool wc_no_refine = false;
    auto* wc = app.add_subcommand("witness-curve", "Witness value against loss");
    add_family_options(wc, wc_family, true);
    wc->add_option("--s", wc_s, "Comma-separated s values")->capture_default_str();
    wc->add_option("--eps", wc_eps, "Loss range lo..hi")->capture_default_str();
    wc->add_option("--eps-step", wc_eps_step, "Loss grid step")->check(CLI::PositiveNumber);
    wc->add_option("--criterion", wc_criterion, "a or b")->check(CLI::IsMember({"a", "b"}));
    wc->add_flag("--no-refine", wc_no_refine, "Criterion b: keep the analytic seed map");
    add_common_options(wc, wc_common, true);

    // error-bars
    Common eb_common;
    std::string eb_s = "0,-1,-2", eb_n_avg = "0..3";
    Real eb_step = 0.05L;
    int eb_k = 100;
    auto* eb = app.add_subcommand("error-bars", "Hull bound under Poisson photon-counting noise");
    eb->add_option("--s", eb_s, "Comma-separated s values")->capture_default_str();
    eb->add_option("--n-avg", eb_n_avg, "Mean photon number range lo..hi")->capture_default_str();
    eb->add_option("--step", eb_step, "Grid step")->check(CLI::PositiveNumber);
    eb->add_option("--k", eb_k, "Number of trials")->check(CLI::PositiveNumber)->capture_default_str();
    add_common_options(eb, eb_common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    std::ostringstream csv;
    csv.imbue(std::locale::classic());

    if (*bc) {
        const SParam s(parse_real(bc_s));
        make_bound_curve(s, uniform_grid(bc_n_max, bc_step), bc_common.exec()).write_csv(csv);
        emit(bc_common.out, csv.str());
    } else if (*th) {
        ThresholdOptions opts;
        opts.tol = th_tol;
        opts.scan_points = th_scan;
        opts.witness = {th_common.cutoff, th_common.nbar_slack, !th_no_refine};
        const auto rows = threshold_scan(th_family.members(), parse_s_list(th_s), parse_criterion(th_criterion),
                                         opts, th_common.exec());
        write_threshold_csv(csv, rows);
        emit(th_common.out, csv.str());
    } else if (*wc) {
        const auto members = wc_family.members();
        if (members.size() != 1) throw UsageError("witness-curve takes a single family member");
        auto eps = parse_range(wc_eps, wc_eps_step);
        for (Real e : eps) {
            if (e < 0 || e > 1) throw UsageError("--eps must lie in [0, 1]");
        }
        const WitnessOptions opts{wc_common.cutoff, wc_common.nbar_slack, !wc_no_refine};
        write_witness_csv(csv, witness_curve(members.front(), parse_s_list(wc_s), eps, parse_criterion(wc_criterion),
                                             opts, wc_common.exec()));
        emit(wc_common.out, csv.str());
    } else if (*eb) {
        ErrorSpec spec{eb_k, parse_range(eb_n_avg, eb_step), parse_s_list(eb_s)};
        write_error_csv(csv, spec, bound_error_curve(spec, eb_common.exec()));
        emit(eb_common.out, csv.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "qng: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "qng: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "qng: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "qng: " << e.what() << '\n';
        return 1;
    }
}
