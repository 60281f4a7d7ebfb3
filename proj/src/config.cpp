#include "nambu/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "nambu/random.hpp"

namespace nambu {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config field \"" + path + "\": " + msg);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.count(key)) fail(join(path, key), "unknown field");
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    expect_object(j, path.empty() ? "<root>" : path);
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing required field \"" + join(path, key) + "\"");
    return *it;
}

double as_double(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
}

long long as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long long>();
}

std::uint64_t as_seed(const json& j, const std::string& path) {
    const long long v = as_int(j, path);
    if (v < 0) fail(path, "seed must be non-negative");
    return static_cast<std::uint64_t>(v);
}

Complex as_complex(const json& j, const std::string& path) {
    if (j.is_number()) return {as_double(j, path), 0.0};
    if (j.is_array() && j.size() == 2) return {as_double(j[0], index_path(path, 0)), as_double(j[1], index_path(path, 1))};
    fail(path, "expected a number or an [re, im] pair");
}

Matrix as_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
    const std::size_t n = j.size();
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const auto rp = index_path(path, r);
        if (!j[r].is_array() || j[r].size() != n) fail(rp, "expected a row of " + std::to_string(n) + " entries");
        for (std::size_t c = 0; c < n; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_complex(j[r][c], index_path(rp, c));
    }
    return m;
}

Vector as_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = as_complex(j[i], index_path(path, i));
    return v;
}

std::size_t as_dim(const json& j, const std::string& path) {
    const long long v = as_int(j, path);
    if (v < 1) fail(path, "must be >= 1");
    return static_cast<std::size_t>(v);
}

// Run `f`, turning engine validation errors into config errors at `path`.
template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

dirac::LatticeSpec parse_lattice(const json& j, const std::string& path) {
    dirac::LatticeSpec lat;
    lat.nt = static_cast<int>(as_int(require(j, "nt", path), join(path, "nt")));
    lat.nz = static_cast<int>(as_int(require(j, "nz", path), join(path, "nz")));
    if (j.contains("spacing")) lat.spacing = as_double(j["spacing"], join(path, "spacing"));
    guarded(path, [&] {
        lat.validate();
        return 0;
    });
    return lat;
}

struct ParsedMetric {
    Metric metric;
    std::optional<dirac::LatticeSpec> lattice;
};

ParsedMetric parse_metric(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"signature", "matrix", "preset", "nt", "nz", "spacing", "dim"});
    const int forms = static_cast<int>(j.contains("signature")) + static_cast<int>(j.contains("matrix")) +
                      static_cast<int>(j.contains("preset"));
    if (forms != 1) fail(path, "give exactly one of \"signature\", \"matrix\" or \"preset\"");

    auto build = [&]() -> ParsedMetric {
        if (j.contains("signature")) {
            const auto& sig = j["signature"];
            const auto sp = join(path, "signature");
            if (!sig.is_array() || sig.empty()) fail(sp, "expected a non-empty array");
            std::vector<double> values;
            for (std::size_t i = 0; i < sig.size(); ++i) values.push_back(as_double(sig[i], index_path(sp, i)));
            return {Metric::from_signature(values), std::nullopt};
        }
        if (j.contains("matrix")) return {Metric::from_matrix(as_matrix(j["matrix"], join(path, "matrix"))), std::nullopt};
        const auto& preset = j["preset"];
        if (preset == "bispinor") return {dirac::bispinor_metric(), std::nullopt};
        if (preset == "dirac1p1") {
            const auto lat = parse_lattice(j, path);
            return {dirac::lattice_metric(lat), lat};
        }
        fail(join(path, "preset"), "unknown preset (expected \"bispinor\" or \"dirac1p1\")");
    };
    ParsedMetric out = guarded(path, build);
    if (j.contains("dim") && as_dim(j["dim"], join(path, "dim")) != out.metric.dim())
        fail(join(path, "dim"), "does not match the metric dimension " + std::to_string(out.metric.dim()));
    return out;
}

struct Context {
    std::size_t dim;
    const MultiMetric* particles;  // null when the run is single-particle
};

Observable parse_observable(const json& j, const std::string& path, const Context& ctx);

std::vector<CasimirTerm> parse_terms(const json& j, const std::string& path) {
    expect_object(j, path);
    const auto& terms = require(j, "terms", path);
    const auto tp = join(path, "terms");
    if (!terms.is_array() || terms.empty()) fail(tp, "expected a non-empty array");
    std::vector<CasimirTerm> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto ip = index_path(tp, i);
        const auto& t = terms[i];
        expect_object(t, ip);
        reject_unknown(t, ip, {"powers", "coeff"});
        CasimirTerm term;
        if (t.contains("coeff")) term.coeff = as_double(t["coeff"], join(ip, "coeff"));
        const auto& powers = require(t, "powers", ip);
        const auto pp = join(ip, "powers");
        expect_object(powers, pp);
        for (const auto& [key, value] : powers.items()) {
            const auto kp = join(pp, key);
            int order = 0;
            const char* first = key.data() + 1;
            const char* last = key.data() + key.size();
            if (key.size() < 2 || key[0] != 'C' || std::from_chars(first, last, order).ptr != last || order < 1 ||
                order > 16)
                fail(kp, "Casimir keys are C1 ... C16");
            const long long p = as_int(value, kp);
            if (p < 0 || p > 16) fail(kp, "power must be in 0..16");
            term.powers[order] = static_cast<int>(p);
        }
        out.push_back(std::move(term));
    }
    return out;
}

Observable parse_observable(const json& j, const std::string& path, const Context& ctx) {
    expect_object(j, path);
    if (j.size() != 1) fail(path, "an observable spec has exactly one key");
    const auto& [key, body] = *j.items().begin();
    const auto bp = join(path, key);
    if (key == "linear") {
        expect_object(body, bp);
        reject_unknown(body, bp, {"matrix", "seed", "scale"});
        Matrix coeff;
        if (body.contains("matrix")) {
            coeff = as_matrix(body["matrix"], join(bp, "matrix"));
        } else if (body.contains("seed")) {
            coeff = random_hermitian_matrix(as_seed(body["seed"], join(bp, "seed")), ctx.dim);
        } else {
            throw ConfigError("missing required field \"" + join(bp, "matrix") + "\"");
        }
        if (body.contains("scale")) coeff *= as_double(body["scale"], join(bp, "scale"));
        if (static_cast<std::size_t>(coeff.rows()) != ctx.dim)
            fail(bp, "matrix dimension " + std::to_string(coeff.rows()) + " does not match metric dimension " +
                         std::to_string(ctx.dim));
        return Observable::linear(std::move(coeff));
    }
    if (key == "casimirPoly") return Observable::casimir_poly(parse_terms(body, bp));
    if (key == "sum") {
        if (!body.is_array() || body.empty()) fail(bp, "expected a non-empty array of observables");
        std::vector<Observable> parts;
        for (std::size_t i = 0; i < body.size(); ++i) parts.push_back(parse_observable(body[i], index_path(bp, i), ctx));
        return Observable::sum(std::move(parts));
    }
    if (key == "subsystem") {
        if (ctx.particles == nullptr) fail(bp, "subsystem observables need a \"particles\" list");
        expect_object(body, bp);
        reject_unknown(body, bp, {"positions", "observable"});
        const auto& pos = require(body, "positions", bp);
        const auto pp = join(bp, "positions");
        if (!pos.is_array() || pos.empty()) fail(pp, "expected a non-empty array");
        std::vector<std::size_t> positions;
        std::size_t sub_dim = 1;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            const long long p = as_int(pos[i], index_path(pp, i));
            if (p < 0 || static_cast<std::size_t>(p) >= ctx.particles->particle_count())
                fail(index_path(pp, i), "particle position out of range");
            positions.push_back(static_cast<std::size_t>(p));
            sub_dim *= ctx.particles->particle(positions.back()).dim();
        }
        const Context inner_ctx{sub_dim, nullptr};
        const Observable inner = parse_observable(require(body, "observable", bp), join(bp, "observable"), inner_ctx);
        return guarded(bp, [&] { return embed_observable(inner, positions, *ctx.particles); });
    }
    fail(bp, "unknown observable kind (expected linear, casimirPoly, sum or subsystem)");
}

DensityState parse_state(const json& j, const std::string& path, std::size_t dim) {
    expect_object(j, path);
    if (j.size() != 1) fail(path, "give exactly one of \"matrix\", \"random\" or \"pure\"");
    const auto& [key, body] = *j.items().begin();
    const auto bp = join(path, key);
    Matrix r;
    if (key == "matrix") {
        r = as_matrix(body, bp);
    } else if (key == "random") {
        expect_object(body, bp);
        reject_unknown(body, bp, {"seed", "scale"});
        r = random_hermitian_matrix(as_seed(require(body, "seed", bp), join(bp, "seed")), dim);
        if (body.contains("scale")) r *= as_double(body["scale"], join(bp, "scale"));
    } else if (key == "pure") {
        expect_object(body, bp);
        reject_unknown(body, bp, {"vector", "seed", "scale"});
        Vector psi;
        if (body.contains("vector")) {
            psi = as_vector(body["vector"], join(bp, "vector"));
        } else if (body.contains("seed")) {
            Rng rng(as_seed(body["seed"], join(bp, "seed")));
            psi = rng.vector(dim);
        } else {
            throw ConfigError("missing required field \"" + join(bp, "vector") + "\"");
        }
        if (body.contains("scale")) psi *= as_double(body["scale"], join(bp, "scale"));
        r = DensityState::outer_product(psi).matrix();
    } else {
        fail(bp, "unknown state kind (expected matrix, random or pure)");
    }
    if (static_cast<std::size_t>(r.rows()) != dim)
        fail(bp, "state dimension " + std::to_string(r.rows()) + " does not match metric dimension " +
                     std::to_string(dim));
    return guarded(bp, [&] { return DensityState::hermitian(std::move(r)); });
}

IntegratorConfig parse_integrator(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"stepSize", "steps", "scheme", "reportEvery"});
    IntegratorConfig cfg;
    if (j.contains("stepSize")) cfg.step_size = as_double(j["stepSize"], join(path, "stepSize"));
    if (j.contains("steps")) {
        const long long n = as_int(j["steps"], join(path, "steps"));
        if (n < 1) fail(join(path, "steps"), "must be >= 1");
        cfg.steps = static_cast<std::size_t>(n);
    }
    if (j.contains("reportEvery")) {
        const long long n = as_int(j["reportEvery"], join(path, "reportEvery"));
        if (n < 1) fail(join(path, "reportEvery"), "must be >= 1");
        cfg.report_every = static_cast<std::size_t>(n);
    }
    if (j.contains("scheme")) {
        const auto& s = j["scheme"];
        if (s == "rk4")
            cfg.scheme = Scheme::rk4;
        else if (s == "midpoint")
            cfg.scheme = Scheme::midpoint;
        else
            fail(join(path, "scheme"), "expected \"rk4\" or \"midpoint\"");
    }
    guarded(path, [&] {
        cfg.validate();
        return 0;
    });
    return cfg;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                          ": malformed JSON: " + e.what());
    }
    if (!root.is_object()) throw ConfigError("line 1, column 1: config must be a JSON object");
    reject_unknown(root, "", {"metric", "particles", "state", "hamiltonian", "s", "integrator", "output"});

    std::optional<ParsedMetric> metric;
    std::optional<MultiMetric> particles;
    if (root.contains("particles")) {
        if (root.contains("metric")) fail("metric", "give either \"metric\" or \"particles\", not both");
        const auto& list = root["particles"];
        if (!list.is_array() || list.empty()) fail("particles", "expected a non-empty array of metric specs");
        std::vector<Metric> ms;
        for (std::size_t i = 0; i < list.size(); ++i) ms.push_back(parse_metric(list[i], index_path("particles", i)).metric);
        particles.emplace(guarded("particles", [&] { return MultiMetric(std::move(ms)); }));
        metric = ParsedMetric{particles->combined(), std::nullopt};
    } else {
        metric = parse_metric(require(root, "metric", ""), "metric");
    }
    const std::size_t dim = metric->metric.dim();

    DensityState state = parse_state(require(root, "state", ""), "state", dim);

    const Context ctx{dim, particles ? &*particles : nullptr};
    const auto& hj = require(root, "hamiltonian", "");
    std::optional<Observable> hamiltonian;
    std::optional<dirac::LatticeSpec> lattice = metric->lattice;
    if (hj.is_object() && hj.contains("preset")) {
        reject_unknown(hj, "hamiltonian", {"preset", "nt", "nz", "spacing"});
        if (hj["preset"] != "dirac1p1") fail("hamiltonian.preset", "unknown preset (expected \"dirac1p1\")");
        if (hj.contains("nt") || hj.contains("nz")) {
            const auto lat = parse_lattice(hj, "hamiltonian");
            if (lattice && (lattice->nt != lat.nt || lattice->nz != lat.nz || lattice->spacing != lat.spacing))
                fail("hamiltonian", "lattice does not match the metric preset");
            lattice = lat;
        }
        if (!lattice) fail("hamiltonian", "the dirac1p1 preset needs nt and nz here or in the metric preset");
        if (lattice->dim() != dim)
            fail("hamiltonian", "lattice dimension " + std::to_string(lattice->dim()) +
                                    " does not match metric dimension " + std::to_string(dim));
        hamiltonian = guarded("hamiltonian", [&] { return dirac::dirac_hamiltonian(*lattice); });
    } else {
        hamiltonian = parse_observable(hj, "hamiltonian", ctx);
    }

    Observable s = Observable::casimir(2, 0.5);
    if (root.contains("s")) {
        const auto& sj = root["s"];
        expect_object(sj, "s");
        if (sj.size() != 1 || !sj.contains("casimirPoly")) fail("s", "expected {\"casimirPoly\": {...}}");
        s = Observable::casimir_poly(parse_terms(sj["casimirPoly"], "s.casimirPoly"));
    }

    IntegratorConfig integrator;
    if (root.contains("integrator")) integrator = parse_integrator(root["integrator"], "integrator");

    std::string output;
    if (root.contains("output")) {
        if (!root["output"].is_string()) fail("output", "expected a path string");
        output = root["output"].get<std::string>();
    }

    return RunConfig{std::move(metric->metric), std::move(particles), lattice, std::move(state),
                     std::move(*hamiltonian), std::move(s), integrator, std::move(output)};
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

RunResult run(const RunConfig& cfg) {
    RunResult r;
    r.trajectory = evolve(cfg.state, cfg.hamiltonian, cfg.s, cfg.metric, cfg.integrator);
    r.summary = drift_report(r.trajectory);
    return r;
}

std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Trajectory& traj) {
    const std::size_t n_eig = traj.samples.empty() ? 0 : traj.samples.front().state.dim();
    out << "s";
    for (int k = 1; k <= kTrackedCasimirs; ++k) out << ",C" << k << "_re,C" << k << "_im";
    out << ",herm_residual";
    for (std::size_t k = 1; k <= n_eig; ++k) out << ",eig_" << k << "_re,eig_" << k << "_im";
    out << '\n';
    for (const auto& sample : traj.samples) {
        const auto& d = sample.diagnostics;
        out << format_number(sample.s);
        for (const auto& c : d.casimirs) out << ',' << format_number(c.real()) << ',' << format_number(c.imag());
        out << ',' << format_number(d.hermiticity_residual);
        for (std::size_t k = 0; k < n_eig; ++k) {
            if (k < d.eigenvalues.size())
                out << ',' << format_number(d.eigenvalues[k].real()) << ',' << format_number(d.eigenvalues[k].imag());
            else
                out << ",nan,nan";
        }
        out << '\n';
    }
}

void write_summary(std::ostream& out, const RunConfig& cfg, const RunResult& result) {
    const auto& d = result.summary;
    json j;
    j["steps"] = cfg.integrator.steps;
    j["stepSize"] = cfg.integrator.step_size;
    j["scheme"] = cfg.integrator.scheme == Scheme::rk4 ? "rk4" : "midpoint";
    j["samples"] = result.trajectory.samples.size();
    j["finalS"] = result.trajectory.samples.empty() ? 0.0 : result.trajectory.samples.back().s;
    j["casimirDrift"] = std::vector<double>(d.casimir_drift.begin(), d.casimir_drift.end());
    j["maxCasimirDrift"] = d.max_casimir_drift;
    j["maxHermiticityResidual"] = d.max_hermiticity_residual;
    j["maxEigenvalueDisplacement"] = d.max_eigenvalue_displacement;
    j["spectralAmbiguities"] = d.ambiguities;
    j["spectralGaps"] = d.gaps;
    out << j.dump(2) << '\n';
}

}  // namespace nambu
