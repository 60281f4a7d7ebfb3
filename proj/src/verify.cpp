#include "nambu/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>

#include "nambu/brackets.hpp"
#include "nambu/dirac_lattice.hpp"
#include "nambu/dynamics.hpp"
#include "nambu/errors.hpp"
#include "nambu/metric.hpp"
#include "nambu/multiparticle.hpp"
#include "nambu/observables.hpp"
#include "nambu/random.hpp"

namespace nambu {

namespace {

constexpr double kZeroTol = 1e-9;
constexpr double kPermTol = 1e-10;
constexpr double kOracleTol = 1e-10;
constexpr double kDriftTol = 1e-8;
constexpr double kSpectralTol = 1e-6;
constexpr double kDiracTol = 1e-7;
constexpr double kRealTol = 1e-10;

enum SuiteTag : std::uint64_t { casimir_tag = 1, antisymmetry_tag, separation_tag, spectral_tag, dirac_tag };

std::uint64_t sub_seed(const VerifyOptions& o, SuiteTag tag, std::uint64_t trial) {
    return o.seed * 1000003ULL + static_cast<std::uint64_t>(tag) * 10007ULL + trial;
}

std::string at_dim(const std::string& name, std::size_t d) { return name + " d=" + std::to_string(d); }

CheckResult check(const char* suite, std::string name, double residual, double tolerance) {
    return {suite, std::move(name), residual, tolerance, residual <= tolerance};
}

std::vector<std::size_t> dims_for(const VerifyOptions& o, std::vector<std::size_t> defaults) {
    if (o.dim) return {*o.dim};
    return defaults;
}

Metric metric_for(Rng& rng, std::size_t d) {
    const auto seed = static_cast<std::uint64_t>(rng.uniform() * 0x1.0p53);
    return random_metric(seed, d, d / 2);
}

Observable random_linear(Rng& rng, std::size_t d) { return Observable::linear(rng.hermitian(d)); }

DensityState random_state(Rng& rng, std::size_t d, double scale = 1.0) {
    return DensityState::hermitian(scale * rng.hermitian(d));
}

/// Random CasimirPoly of degree <= 2 in (C1, C2, C3).
Observable random_casimir_poly(Rng& rng) {
    std::vector<CasimirTerm> terms;
    for (int a = 1; a <= 3; ++a) terms.push_back({{{a, 1}}, 0.5 * rng.symmetric()});
    for (int a = 1; a <= 3; ++a)
        for (int b = a; b <= 3; ++b) {
            CasimirTerm t;
            t.powers[a] += 1;
            t.powers[b] += 1;
            t.coeff = 0.25 * rng.symmetric();
            terms.push_back(std::move(t));
        }
    return Observable::casimir_poly(std::move(terms));
}

/// Fixed nonlinear S used by the dynamic checks.
Observable nonlinear_s() {
    return Observable::casimir_poly({{{{2, 1}}, 0.5}, {{{3, 1}}, 0.1}, {{{1, 1}, {3, 1}}, 0.05}});
}

double relative_zero(const Observable& f, const Observable& h, const Observable& s, const Metric& m,
                     const DensityState& rho) {
    return std::abs(lie_nambu(f, h, s, m, rho).value) / bracket_scale(f, h, s, m, rho);
}

// ---- casimir ---------------------------------------------------------------

std::vector<CheckResult> casimir_suite(const VerifyOptions& o) {
    const char* suite = "casimir";
    std::vector<CheckResult> out;
    std::uint64_t trial = 0;
    for (const std::size_t d : dims_for(o, {2, 3, 4})) {
        double cc = 0.0, cfs = 0.0;
        for (int t = 0; t < 10; ++t) {
            Rng rng(sub_seed(o, casimir_tag, trial++));
            const Metric m = metric_for(rng, d);
            const DensityState rho = random_state(rng, d);
            const Observable f = random_linear(rng, d);
            const Observable s = random_casimir_poly(rng);
            for (int n = 1; n <= 4; ++n) {
                for (int k = 1; k <= 4; ++k)
                    cc = std::max(cc, relative_zero(Observable::casimir(n), Observable::casimir(k), f, m, rho));
                cfs = std::max(cfs, relative_zero(Observable::casimir(n), f, s, m, rho));
            }
        }
        out.push_back(check(suite, at_dim("{C_n,C_m,F} n,m<=4", d), cc, kZeroTol));
        out.push_back(check(suite, at_dim("{C_n,F,S} S quadratic in C1..C3", d), cfs, kZeroTol));
    }
    const std::size_t d = o.dim.value_or(4);
    Rng rng(sub_seed(o, casimir_tag, 1000));
    const Metric m = metric_for(rng, d);
    const DensityState rho = random_state(rng, d, 0.5);
    const Observable h = random_linear(rng, d);
    IntegratorConfig cfg;
    cfg.step_size = 1e-3;
    cfg.steps = 1000;
    cfg.report_every = 10;
    const auto summary = drift_report(evolve(rho, h, nonlinear_s(), m, cfg));
    out.push_back(check(suite, at_dim("C1..C4 drift, rk4 1000 steps", d), summary.max_casimir_drift, kDriftTol));
    return out;
}

// ---- antisymmetry ----------------------------------------------------------

std::vector<CheckResult> antisymmetry_suite(const VerifyOptions& o) {
    const char* suite = "antisymmetry";
    std::vector<CheckResult> out;
    std::uint64_t trial = 0;
    for (const std::size_t d : dims_for(o, {2, 3, 4})) {
        double perm = 0.0, lp = 0.0, oracle = 0.0;
        for (int t = 0; t < 50; ++t) {
            Rng rng(sub_seed(o, antisymmetry_tag, trial++));
            const Metric m = metric_for(rng, d);
            const DensityState rho = random_state(rng, d);
            const std::array<Observable, 3> obs{random_linear(rng, d), random_linear(rng, d), random_linear(rng, d)};
            const double scale = bracket_scale(obs[0], obs[1], obs[2], m, rho);
            const Complex base = lie_nambu(obs[0], obs[1], obs[2], m, rho).value;
            std::array<int, 3> p{0, 1, 2};
            do {
                int inversions = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = i + 1; j < 3; ++j) inversions += p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)];
                const double sign = inversions % 2 == 0 ? 1.0 : -1.0;
                const Complex v = lie_nambu(obs[static_cast<std::size_t>(p[0])], obs[static_cast<std::size_t>(p[1])],
                                            obs[static_cast<std::size_t>(p[2])], m, rho)
                                      .value;
                perm = std::max(perm, std::abs(v - sign * base) / scale);
            } while (std::next_permutation(p.begin(), p.end()));

            const Complex fh = lie_poisson(obs[0], obs[1], m, rho).value;
            const Complex hf = lie_poisson(obs[1], obs[0], m, rho).value;
            lp = std::max(lp, std::abs(fh + hf) / scale);

            const Complex nambu_oracle = lie_nambu(obs[0], obs[1], obs[2], m, rho, BracketPath::oracle).value;
            const Complex lp_oracle = lie_poisson(obs[0], obs[1], m, rho, BracketPath::oracle).value;
            oracle = std::max({oracle, std::abs(nambu_oracle - base) / scale, std::abs(lp_oracle - fh) / scale});
        }
        out.push_back(check(suite, at_dim("triple bracket, six permutations", d), perm, kPermTol));
        out.push_back(check(suite, at_dim("Lie-Poisson {F,H} = -{H,F}", d), lp, kPermTol));
        out.push_back(check(suite, at_dim("materialized structure constants vs chain", d), oracle, kOracleTol));
    }
    return out;
}

// ---- separation ------------------------------------------------------------

std::vector<CheckResult> separation_suite(const VerifyOptions& o) {
    const char* suite = "separation";
    const std::size_t d = o.dim.value_or(2);
    if (d < 2 || d > 4) throw ValidationError("separation supports --dim 2..4");
    const std::size_t n_particles = d == 2 ? 3 : 2;
    const std::string tag = "N=" + std::to_string(n_particles) + " d=" + std::to_string(d);
    std::vector<CheckResult> out;

    double linear_sep = 0.0, nonlinear_sep = 0.0, instant = 0.0;
    for (std::uint64_t t = 0; t < 10; ++t) {
        Rng rng(sub_seed(o, separation_tag, t));
        std::vector<Metric> ms;
        for (std::size_t p = 0; p < n_particles; ++p) ms.push_back(metric_for(rng, d));
        const MultiMetric mm(ms);
        const std::size_t total = mm.total_dim();
        const MultiState rho(mm.dims(), random_state(rng, total));

        std::vector<std::size_t> first{0}, rest;
        std::size_t rest_dim = 1;
        for (std::size_t p = 1; p < n_particles; ++p) {
            rest.push_back(p);
            rest_dim *= d;
        }

        const Observable s = random_casimir_poly(rng);
        const Observable f1 = embed_observable(random_linear(rng, d), first, mm);
        const Observable g2 = embed_observable(random_linear(rng, rest_dim), rest, mm);
        const auto& g = mm.combined();
        linear_sep = std::max(linear_sep, std::abs(lie_nambu_n(f1, g2, s, mm, rho).value) /
                                              bracket_scale(f1, g2, s, g, rho.state()));

        const Observable nf1 = embed_observable(random_casimir_poly(rng), first, mm);
        const Observable ng2 = embed_observable(random_casimir_poly(rng), rest, mm);
        nonlinear_sep = std::max(nonlinear_sep, std::abs(lie_nambu_n(nf1, ng2, s, mm, rho).value) /
                                                    bracket_scale(nf1, ng2, s, g, rho.state()));

        const Observable h1 = embed_observable(random_linear(rng, d), first, mm);
        const Observable h2 = embed_observable(random_linear(rng, rest_dim), rest, mm);
        const Complex full = lie_nambu_n(nf1, h1 + h2, s, mm, rho).value;
        const Complex part = lie_nambu_n(nf1, h1, s, mm, rho).value;
        instant = std::max(instant, std::abs(full - part) / bracket_scale(nf1, h1 + h2, s, g, rho.state()));
    }
    out.push_back(check(suite, "{F^I,G^II,S} linear subsystem observables " + tag, linear_sep, kZeroTol));
    out.push_back(check(suite, "{F^I,G^II,S} nonlinear subsystem functionals " + tag, nonlinear_sep, kZeroTol));
    out.push_back(check(suite, "{F^I,H^I+H^II,S} = {F^I,H^I,S} " + tag, instant, kZeroTol));

    // Reduced dynamics of particle 0 under H^I + H^II equals the subsystem's
    // own dynamics under H^I when S depends on C1, C2 only.
    double autonomy = 0.0;
    for (std::uint64_t t = 0; t < 2; ++t) {
        Rng rng(sub_seed(o, separation_tag, 100 + t));
        std::vector<Metric> ms;
        for (std::size_t p = 0; p < n_particles; ++p) ms.push_back(metric_for(rng, d));
        const MultiMetric mm(ms);
        const DensityState rho = random_state(rng, mm.total_dim(), 0.5);
        std::vector<std::size_t> rest;
        std::size_t rest_dim = 1;
        for (std::size_t p = 1; p < n_particles; ++p) {
            rest.push_back(p);
            rest_dim *= d;
        }
        const Observable h1_local = random_linear(rng, d);
        const Observable h = embed_observable(h1_local, {0}, mm) + embed_observable(random_linear(rng, rest_dim), rest, mm);
        const Observable s = t == 0 ? Observable::casimir(2, 0.5)
                                    : Observable::casimir_poly({{{{1, 2}}, 1.0}, {{{2, 1}}, 0.5}, {{{2, 2}}, 0.125}});
        // Effective rate: S' = dS/dC2 at the initial state (C1, C2 are conserved).
        const Complex c2 = casimir(mm.combined(), 2, rho);
        const double rate = t == 0 ? 0.5 : 0.5 + 0.25 * c2.real();

        IntegratorConfig cfg;
        cfg.step_size = 1e-3;
        cfg.steps = 100;
        cfg.report_every = 100;
        const auto full = evolve(rho, h, s, mm.combined(), cfg);
        const Subsystem sub(mm, {0});
        const auto local = evolve(sub.reduce(rho), h1_local, Observable::casimir(2, rate), sub.metric(), cfg);
        const Matrix diff = sub.reduce(full.samples.back().state).matrix() - local.samples.back().state.matrix();
        autonomy = std::max(autonomy, diff.cwiseAbs().maxCoeff());
    }
    out.push_back(check(suite, "subsystem autonomy, 100 steps, S in C1,C2 " + tag, autonomy, kDriftTol));
    return out;
}

// ---- spectral --------------------------------------------------------------

std::vector<CheckResult> spectral_suite(const VerifyOptions& o) {
    const char* suite = "spectral";
    const std::size_t d = o.dim.value_or(4);
    double displacement = 0.0;
    std::size_t ambiguities = 0, gaps = 0;
    for (std::uint64_t t = 0; t < 3; ++t) {
        Rng rng(sub_seed(o, spectral_tag, t));
        // G = S^† J S and R = S^† D S give X = R G^{-1} similar to D J: real spectrum.
        const Matrix sm = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) + 0.3 * rng.matrix(d);
        Matrix j = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        Matrix dm = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t k = 0; k < d; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            if (k < d / 2) j(kk, kk) = -1.0;
            dm(kk, kk) = 0.5 * (static_cast<double>(k) + 1.0) / static_cast<double>(d) + 0.1 * rng.uniform();
        }
        const Metric m = Metric::from_matrix(sm.adjoint() * j * sm);
        const Matrix r = sm.adjoint() * dm * sm;
        const DensityState rho = DensityState::hermitian(0.5 * (r + r.adjoint()));
        const Observable h = random_linear(rng, d);

        IntegratorConfig cfg;
        cfg.step_size = 1e-3;
        cfg.steps = 1000;
        cfg.report_every = 10;
        const auto summary = drift_report(evolve(rho, h, nonlinear_s(), m, cfg));
        displacement = std::max(displacement, summary.max_eigenvalue_displacement);
        ambiguities += summary.ambiguities;
        gaps += summary.gaps;
    }
    std::vector<CheckResult> out;
    out.push_back(check(suite, at_dim("eigenvalue paths constant on s in [0,1]", d), displacement, kSpectralTol));
    out.push_back(check(suite, at_dim("ambiguous or non-diagonalizable samples", d),
                        static_cast<double>(ambiguities + gaps), 0.0));
    return out;
}

// ---- dirac -----------------------------------------------------------------

double dirac_consistency(const dirac::LatticeSpec& lat, Rng& rng) {
    const Vector psi0 = rng.vector(lat.dim());
    IntegratorConfig cfg;
    cfg.step_size = 1e-3;
    cfg.steps = 500;
    cfg.report_every = 500;
    const auto pure = dirac::pure_state_evolve({lat, psi0}, cfg);
    const auto dens = evolve(DensityState::outer_product(psi0), dirac::dirac_hamiltonian(lat), Observable::casimir(2, 0.5),
                             dirac::lattice_metric(lat), cfg);
    const Matrix expected = DensityState::outer_product(pure.samples.back().psi).matrix();
    return (dens.samples.back().state.matrix() - expected).cwiseAbs().maxCoeff();
}

std::vector<CheckResult> dirac_suite(const VerifyOptions& o) {
    const char* suite = "dirac";
    std::vector<CheckResult> out;

    const auto b = dirac::bispinor_blocks();
    const Matrix common = dirac::bispinor_metric().matrix();
    const Matrix id = Matrix::Identity(4, 4);
    double blocks = 0.0;
    blocks = std::max(blocks, (dirac::to_common_ordering(b.g_a_b, false, false) - common).cwiseAbs().maxCoeff());
    blocks = std::max(blocks, (dirac::to_common_ordering(b.g_a_bp, false, true) - common).cwiseAbs().maxCoeff());
    blocks = std::max(blocks, (dirac::to_common_ordering(b.g_ap_b, true, false) - common).cwiseAbs().maxCoeff());
    blocks = std::max(blocks, (dirac::to_common_ordering(b.g_ap_bp, true, true) - common).cwiseAbs().maxCoeff());
    blocks = std::max(blocks, (dirac::to_common_ordering(b.epsilon_a_bp, false, true) - id).cwiseAbs().maxCoeff());
    out.push_back(check(suite, "bispinor g blocks reduce to diag(-1,-1,1,1)", blocks, 1e-15));

    double imag = 0.0;
    for (const auto& lat : {dirac::LatticeSpec{2, 2, 1.0}, dirac::LatticeSpec{4, 4, 1.0}}) {
        const Observable h = dirac::dirac_hamiltonian(lat);
        const Metric m = dirac::lattice_metric(lat);
        for (std::uint64_t t = 0; t < 5; ++t) {
            Rng rng(sub_seed(o, dirac_tag, t));
            imag = std::max(imag, std::abs(evaluate(h, m, random_state(rng, lat.dim())).imag()));
        }
    }
    out.push_back(check(suite, "Im H on Hermitian states, 2x2 and 4x4", imag, kRealTol));

    Rng rng2(sub_seed(o, dirac_tag, 100));
    out.push_back(check(suite, "pure vs density evolution at s=0.5, 2x2", dirac_consistency({2, 2, 1.0}, rng2), kDiracTol));
    Rng rng4(sub_seed(o, dirac_tag, 101));
    out.push_back(check(suite, "pure vs density evolution at s=0.5, 4x4", dirac_consistency({4, 4, 1.0}, rng4), kDiracTol));

    Rng rngn(sub_seed(o, dirac_tag, 102));
    const dirac::LatticeSpec big{8, 8, 1.0};
    IntegratorConfig cfg;
    cfg.step_size = 1e-3;
    cfg.steps = 500;
    cfg.report_every = 50;
    const auto traj = dirac::pure_state_evolve({big, rngn.vector(big.dim())}, cfg);
    double drift = 0.0;
    for (const auto& sm : traj.samples) drift = std::max(drift, std::abs(sm.norm - traj.samples.front().norm));
    out.push_back(check(suite, "indefinite norm drift, pure state 8x8", drift, kDriftTol));
    return out;
}

using SuiteFn = std::vector<CheckResult> (*)(const VerifyOptions&);

SuiteFn suite_fn(const std::string& name) {
    if (name == "casimir") return casimir_suite;
    if (name == "antisymmetry") return antisymmetry_suite;
    if (name == "separation") return separation_suite;
    if (name == "spectral") return spectral_suite;
    if (name == "dirac") return dirac_suite;
    return nullptr;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"casimir", "antisymmetry", "separation", "spectral", "dirac"};
    return names;
}

bool is_suite(const std::string& name) { return name == "all" || suite_fn(name) != nullptr; }

std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& opts) {
    if (opts.dim && (*opts.dim < 2 || *opts.dim > kDefaultMaxStructureDim))
        throw ValidationError("--dim must be in 2.." + std::to_string(kDefaultMaxStructureDim));
    if (suite != "all") {
        const SuiteFn fn = suite_fn(suite);
        if (fn == nullptr) throw ValidationError("unknown suite \"" + suite + "\"");
        return fn(opts);
    }
    if (opts.dim && *opts.dim > 4) throw ValidationError("separation supports --dim 2..4");
    std::vector<std::future<std::vector<CheckResult>>> jobs;
    for (const auto& name : suite_names()) jobs.push_back(std::async(std::launch::async, suite_fn(name), opts));
    std::vector<CheckResult> out;
    for (auto& job : jobs) {
        auto part = job.get();
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

void print_table(std::ostream& out, const std::vector<CheckResult>& results) {
    char line[256];
    std::snprintf(line, sizeof line, "%-13s %-58s %11s %11s  %s\n", "suite", "check", "residual", "tolerance", "result");
    out << line;
    std::size_t passed = 0;
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "%-13s %-58s %11.3e %11.3e  %s\n", r.suite.c_str(), r.name.c_str(), r.residual,
                      r.tolerance, r.pass ? "PASS" : "FAIL");
        out << line;
        passed += r.pass ? 1 : 0;
    }
    out << passed << "/" << results.size() << " checks passed\n";
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

}  // namespace nambu
