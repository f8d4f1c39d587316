#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybrid4/basis.hpp"
#include "hybrid4/dual.hpp"
#include "hybrid4/gauss.hpp"
#include "hybrid4/quadrature.hpp"

namespace hybrid4 {

// ---------------------------------------------------------------------------
// Orbit decompositions

/// Multiset of orbit types, stored as a count per type S1..S7.
struct Decomposition {
    std::array<int, 7> counts{};

    int points() const
    {
        int n = 0;
        for (std::size_t t = 0; t < 7; ++t)
            n += counts[t] * orbit_size(all_orbit_types[t]);
        return n;
    }
    /// Free abscissa parameters.
    int dof() const
    {
        int n = 0;
        for (std::size_t t = 0; t < 7; ++t)
            n += counts[t] * orbit_param_count(all_orbit_types[t]);
        return n;
    }
    int orbit_count() const
    {
        int n = 0;
        for (int c : counts)
            n += c;
        return n;
    }
    /// Parameters plus one weight per orbit.
    int unknowns() const { return dof() + orbit_count(); }

    std::vector<OrbitType> types() const
    {
        std::vector<OrbitType> out;
        for (std::size_t t = 0; t < 7; ++t)
            for (int c = 0; c < counts[t]; ++c)
                out.push_back(all_orbit_types[t]);
        return out;
    }

    std::string to_string() const
    {
        std::string s;
        for (std::size_t t = 0; t < 7; ++t)
            if (counts[t] > 0) {
                if (!s.empty())
                    s += '+';
                s += orbit_name(all_orbit_types[t]) + "x" + std::to_string(counts[t]);
            }
        return s;
    }

    friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

namespace detail {

inline void enumerate_decompositions(int remaining, std::size_t type, Decomposition& cur,
                                     std::vector<Decomposition>& out)
{
    if (type == 7) {
        if (remaining == 0)
            out.push_back(cur);
        return;
    }
    const int size = orbit_size(all_orbit_types[type]);
    // Descending types first so S1 (size 1) absorbs whatever is left.
    for (int c = 0; c * size <= remaining; ++c) {
        cur.counts[type] = c;
        enumerate_decompositions(remaining - c * size, type + 1, cur, out);
    }
    cur.counts[type] = 0;
}

} // namespace detail

/// Every multiset of orbit types whose sizes sum to n (S5 and S6 distinct).
inline std::vector<Decomposition> enumerate_decompositions(int n)
{
    std::vector<Decomposition> out;
    if (n < 1)
        return out;
    Decomposition cur;
    detail::enumerate_decompositions(n, 0, cur, out);
    return out;
}

// ---------------------------------------------------------------------------
// Moment system

/// Modes that can be nonzero when summed over a symmetric orbit: i, j, k
/// even, and one representative per permutation class (i <= j <= k). The
/// constant mode comes first.
inline std::vector<BasisIndex> symmetric_modes(int p)
{
    std::vector<BasisIndex> out;
    for (int deg = 0; deg <= p; ++deg)
        for (int i = 0; i <= deg; i += 2)
            for (int j = i; i + j <= deg; j += 2)
                for (int k = j; i + j + k <= deg; k += 2)
                    out.push_back({i, j, k, deg - i - j - k});
    return out;
}

/// Right-hand side of the moment system: the integral of each mode over K*.
/// Only the constant mode integrates to something nonzero (psi_0 vol).
inline double mode_integral(const BasisIndex& m)
{
    return m.degree() == 0 ? std::sqrt(2.0) : 0.0;
}

/// Column of orbit sums sum_{x in orbit} psi_m(x), with derivatives with
/// respect to the orbit's raw parameters.
struct OrbitColumn {
    Eigen::VectorXd value;
    Eigen::MatrixXd grad; // rows = modes, cols = orbit parameters
};

inline OrbitColumn orbit_column(OrbitType type, const double* params, const std::vector<BasisIndex>& modes, int p)
{
    using D = Dual<4>;
    const int np = orbit_param_count(type);
    std::array<D, 4> dp;
    for (int i = 0; i < np; ++i)
        dp[i] = D::variable(params[i], static_cast<std::size_t>(i));
    const auto gen = orbit_generator<D>(type, dp.data());
    const D delta = dp[np - 1];

    OrbitColumn col;
    col.value = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(modes.size()));
    col.grad = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(modes.size()), np);

    PyramidBasis<D> basis(p);
    std::vector<std::array<double, 3>> seen;
    for (const auto& sp : signed_permutations()) {
        BasicPoint4<D> x;
        std::array<double, 3> key;
        for (int c = 0; c < 3; ++c) {
            x[c] = static_cast<double>(sp.sign[c]) * gen[sp.perm[c]];
            key[c] = x[c].v == 0.0 ? 0.0 : x[c].v;
        }
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            continue;
        seen.push_back(key);
        x[3] = delta;
        basis.set_point(x);
        for (std::size_t m = 0; m < modes.size(); ++m) {
            const D v = basis(modes[m]);
            col.value[static_cast<Eigen::Index>(m)] += v.v;
            for (int i = 0; i < np; ++i)
                col.grad(static_cast<Eigen::Index>(m), i) += v.d[static_cast<std::size_t>(i)];
        }
    }
    return col;
}

struct WeightSolution {
    std::vector<double> weights;
    double residual = 0.0; // 2-norm of the moment residual
    bool rank_deficient = false;
};

/// Least-squares orbit weights for fixed abscissae. Rows: sum of weights = 2
/// and every mode of Xi(p) integrating to zero; one column per orbit.
inline WeightSolution solve_weights(const std::vector<SymmetryOrbit>& orbits, int p)
{
    const auto xi = enumerate_Xi(p);
    const auto rows = static_cast<Eigen::Index>(xi.size() + 1);
    const auto cols = static_cast<Eigen::Index>(orbits.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    b[0] = reference_pyramid_volume;
    PyramidBasis<double> basis(p);
    for (Eigen::Index o = 0; o < cols; ++o) {
        SymmetryOrbit unit = orbits[static_cast<std::size_t>(o)];
        for (const auto& x : expand_orbit(unit)) {
            a(0, o) += 1.0;
            basis.set_point(x);
            for (std::size_t m = 0; m < xi.size(); ++m)
                a(static_cast<Eigen::Index>(m) + 1, o) += basis(xi[m]);
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-13);
    WeightSolution out;
    const Eigen::VectorXd w = qr.solve(b);
    out.weights.assign(w.data(), w.data() + w.size());
    out.residual = (a * w - b).norm();
    out.rank_deficient = qr.rank() < cols;
    return out;
}

// ---------------------------------------------------------------------------
// Constrained parameter transform
//
// delta = -s(u_delta) in (-1, 0) and each spatial parameter
// a = -delta s(u_a) in (0, -delta), with s the logistic function.

inline double logistic(double u)
{
    return 1.0 / (1.0 + std::exp(-u));
}

inline double logit(double s)
{
    return std::log(s / (1.0 - s));
}

/// Unconstrained coordinates of a valid orbit.
inline std::vector<double> to_unconstrained(const SymmetryOrbit& o)
{
    const double delta = o.delta();
    std::vector<double> u(o.params.size());
    u.back() = logit(-delta);
    for (std::size_t i = 0; i + 1 < o.params.size(); ++i)
        u[i] = logit(o.params[i] / -delta);
    return u;
}

inline void from_unconstrained(const double* u, int np, double* raw, double* jac /* np x np, row-major */)
{
    const double sd = logistic(u[np - 1]);
    const double delta = -sd;
    const double dsd = sd * (1.0 - sd);
    raw[np - 1] = delta;
    std::fill(jac, jac + np * np, 0.0);
    jac[(np - 1) * np + (np - 1)] = -dsd;
    for (int i = 0; i + 1 < np; ++i) {
        const double si = logistic(u[i]);
        raw[i] = -delta * si;
        jac[i * np + i] = -delta * si * (1.0 - si);
        jac[i * np + (np - 1)] = dsd * si;
    }
}

// ---------------------------------------------------------------------------
// Nonlinear refinement

struct SearchConfig {
    int strength = 2;
    int min_points = 1;
    int max_points = 30;
    double tol = 1e-12;              // max moment residual over Xi(p)
    int restarts = 20;               // random restarts per decomposition
    std::uint64_t seed = 1;
    double budget_seconds = 600.0;   // wall-clock budget for search()
    int max_iterations = 500;
    int stall_window = 10;           // iterations per progress check, 0 = never abandon
    int max_extra_unknowns = 4;      // unknowns allowed above the equation count
    long max_attempts = -1;          // deterministic cap on refine calls, -1 = none
    bool stop_at_first = true;
    // Accepted points keep this relative distance from the boundary of K*,
    // so limits of rules that slide onto a facet are not reported.
    double interior_margin = 1e-6;
};

enum class RefineStatus { Converged, NoConvergence, NegativeWeight, NotInterior };

inline const char* to_string(RefineStatus s)
{
    switch (s) {
    case RefineStatus::Converged: return "converged";
    case RefineStatus::NoConvergence: return "no-convergence";
    case RefineStatus::NegativeWeight: return "negative-weight";
    case RefineStatus::NotInterior: return "not-interior";
    }
    return "?";
}

struct RefineResult {
    std::optional<QuadratureRule> rule;
    RefineStatus status = RefineStatus::NoConvergence;
    double residual = std::numeric_limits<double>::infinity(); // best reduced residual
    int iterations = 0;
};

/// Reduced moment system for a decomposition, evaluated in unconstrained
/// coordinates with Kaufman's variable-projection Jacobian.
class MomentSystem {
public:
    MomentSystem(std::vector<OrbitType> types, int p)
        : types_(std::move(types)), p_(p), modes_(symmetric_modes(p))
    {
        b_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(modes_.size()));
        for (std::size_t m = 0; m < modes_.size(); ++m)
            b_[static_cast<Eigen::Index>(m)] = mode_integral(modes_[m]);
        for (auto t : types_) {
            offsets_.push_back(nparams_);
            nparams_ += orbit_param_count(t);
        }
    }

    int parameter_count() const { return nparams_; }
    std::size_t equation_count() const { return modes_.size(); }
    const std::vector<OrbitType>& types() const { return types_; }

    struct Eval {
        Eigen::VectorXd residual;
        Eigen::VectorXd weights;
        Eigen::MatrixXd jacobian;
    };

    std::vector<double> raw_params(const Eigen::VectorXd& u) const
    {
        std::vector<double> raw(static_cast<std::size_t>(nparams_));
        std::array<double, 16> jac;
        for (std::size_t o = 0; o < types_.size(); ++o) {
            const int np = orbit_param_count(types_[o]);
            from_unconstrained(u.data() + offsets_[o], np, raw.data() + offsets_[o], jac.data());
        }
        return raw;
    }

    Eval evaluate(const Eigen::VectorXd& u, bool with_jacobian) const
    {
        const auto m = static_cast<Eigen::Index>(modes_.size());
        const auto no = static_cast<Eigen::Index>(types_.size());
        Eigen::MatrixXd a(m, no);
        Eigen::MatrixXd da(m, nparams_); // derivative of column owning each parameter
        std::array<double, 4> raw;
        std::array<double, 16> jac;
        for (std::size_t o = 0; o < types_.size(); ++o) {
            const int np = orbit_param_count(types_[o]);
            from_unconstrained(u.data() + offsets_[o], np, raw.data(), jac.data());
            const auto col = orbit_column(types_[o], raw.data(), modes_, p_);
            a.col(static_cast<Eigen::Index>(o)) = col.value;
            if (with_jacobian) {
                Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> j(jac.data(),
                                                                                                        np, np);
                da.middleCols(offsets_[o], np) = col.grad * j.topLeftCorner(np, np);
            }
        }
        Eval ev;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
        ev.weights = qr.solve(b_);
        ev.residual = a * ev.weights - b_;
        if (with_jacobian) {
            const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, std::min(m, no));
            ev.jacobian.resize(m, nparams_);
            for (std::size_t o = 0; o < types_.size(); ++o) {
                const int np = orbit_param_count(types_[o]);
                for (int i = 0; i < np; ++i) {
                    const Eigen::Index c = offsets_[o] + i;
                    Eigen::VectorXd g = da.col(c) * ev.weights[static_cast<Eigen::Index>(o)];
                    g -= q * (q.transpose() * g);
                    ev.jacobian.col(c) = g;
                }
            }
        }
        return ev;
    }

    /// Orbit list (raw parameters and solved weights) for a parameter vector.
    std::vector<SymmetryOrbit> orbits(const Eigen::VectorXd& u, const Eigen::VectorXd& weights) const
    {
        const auto raw = raw_params(u);
        std::vector<SymmetryOrbit> out;
        for (std::size_t o = 0; o < types_.size(); ++o) {
            SymmetryOrbit orb;
            orb.type = types_[o];
            orb.params.assign(raw.begin() + offsets_[o], raw.begin() + offsets_[o] + orbit_param_count(types_[o]));
            orb.weight = weights[static_cast<Eigen::Index>(o)];
            out.push_back(std::move(orb));
        }
        return out;
    }

private:
    std::vector<OrbitType> types_;
    int p_;
    std::vector<BasisIndex> modes_;
    Eigen::VectorXd b_;
    std::vector<int> offsets_;
    int nparams_ = 0;
};

/// True when every orbit parameter keeps a relative distance of margin from
/// its constraint bounds.
inline bool orbit_within_margin(const SymmetryOrbit& o, double margin)
{
    const double delta = o.delta();
    if (!(delta > -1.0 + margin && delta < -margin))
        return false;
    for (std::size_t i = 0; i + 1 < o.params.size(); ++i)
        if (!(o.params[i] > -delta * margin && o.params[i] < -delta * (1.0 - margin)))
            return false;
    return true;
}

/// Damped Gauss-Newton (Levenberg-Marquardt) on the orbit parameters, with
/// the weights re-solved by linear least squares at every iterate. The rule
/// is accepted when the full moment residual over Xi(p) is within tol, all
/// weights are positive and all points are strictly interior.
inline RefineResult refine_rule(const Decomposition& decomposition, const std::vector<SymmetryOrbit>& initial,
                                const SearchConfig& config)
{
    const int p = config.strength;
    MomentSystem sys(decomposition.types(), p);
    RefineResult result;
    if (initial.size() != decomposition.types().size())
        throw Error(ErrorCode::InvalidParams, "initial guess does not match the decomposition");

    Eigen::VectorXd u(sys.parameter_count());
    {
        Eigen::Index k = 0;
        for (std::size_t o = 0; o < initial.size(); ++o) {
            if (initial[o].type != sys.types()[o])
                throw Error(ErrorCode::InvalidParams, "initial guess orbit types are out of order");
            check_orbit(initial[o]);
            for (double v : to_unconstrained(initial[o]))
                u[k++] = v;
        }
    }

    auto ev = sys.evaluate(u, true);
    double rnorm = ev.residual.norm();
    double lambda = 1e-3;
    const double target = 0.05 * config.tol;
    int it = 0;
    double last_check = rnorm;
    for (; it < config.max_iterations && rnorm > target; ++it) {
        const Eigen::MatrixXd& j = ev.jacobian;
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * ev.residual;
        Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-12);
        bool accepted = false;
        while (lambda < 1e16) {
            Eigen::MatrixXd h = jtj;
            h.diagonal() += lambda * diag;
            const Eigen::VectorXd step = h.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 10;
                continue;
            }
            const Eigen::VectorXd trial = u + step;
            auto ev_trial = sys.evaluate(trial, false);
            const double tn = ev_trial.residual.norm();
            if (std::isfinite(tn) && tn < rnorm) {
                u = trial;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                const double step_norm = step.norm();
                ev = sys.evaluate(u, true);
                rnorm = ev.residual.norm();
                if (step_norm < 1e-14 * (1.0 + u.norm()))
                    it = config.max_iterations;
                break;
            }
            lambda *= 10;
        }
        if (!accepted)
            break;
        // Abandon runs that are clearly not heading to a zero residual.
        if (config.stall_window > 0 && it > 0 && it % config.stall_window == 0) {
            if (rnorm > 0.5 * last_check && rnorm > 1e-6)
                break;
            last_check = rnorm;
        }
    }
    result.iterations = it;
    result.residual = rnorm;
    if (!(rnorm <= config.tol)) {
        result.status = RefineStatus::NoConvergence;
        return result;
    }
    if ((ev.weights.array() <= 0.0).any()) {
        result.status = RefineStatus::NegativeWeight;
        return result;
    }
    auto orbits = sys.orbits(u, ev.weights);
    try {
        for (const auto& o : orbits) {
            check_orbit(o);
            if (!orbit_within_margin(o, config.interior_margin))
                throw Error(ErrorCode::ConstraintViolation, "point too close to the boundary");
        }
        QuadratureRule rule(p, orbits);
        for (const auto& x : rule.points())
            if (!strictly_inside_pyramid(x))
                throw Error(ErrorCode::ConstraintViolation, "point on the boundary");
        const auto rep = verify_strength(rule, p, config.tol);
        if (!rep.pass) {
            result.status = RefineStatus::NoConvergence;
            return result;
        }
        result.rule = std::move(rule);
        result.status = RefineStatus::Converged;
    } catch (const Error&) {
        result.status = RefineStatus::NotInterior;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Search driver

struct SearchLogEntry {
    int points = 0;
    std::string decomposition;
    int restart = 0;
    double residual = 0.0;
    RefineStatus status = RefineStatus::NoConvergence;
};

struct SearchOutcome {
    std::vector<QuadratureRule> rules; // minimum N first
    std::vector<SearchLogEntry> log;
    bool budget_exhausted = false;
};

/// Starting point for a decomposition. Restart 0 places the deltas at
/// Gauss-Jacobi nodes for the (1 - d)^3 weight of the x4 marginal and the
/// spatial parameters at fixed fractions of the cross-section. Later restarts
/// draw delta = -U^(1/3) and each spatial parameter uniformly on (0, -delta).
inline std::vector<SymmetryOrbit> initial_guess(const Decomposition& dec, int restart, std::mt19937_64& rng)
{
    const auto types = dec.types();
    std::vector<SymmetryOrbit> out;
    if (restart == 0) {
        const auto gj = gauss_jacobi(static_cast<int>(types.size()), 3.0, 0.0);
        const std::array<double, 3> frac{0.55, 0.3, 0.8};
        for (std::size_t o = 0; o < types.size(); ++o) {
            SymmetryOrbit orb;
            orb.type = types[o];
            const double delta = 0.5 * (gj.nodes[o] - 1.0);
            for (int i = 0; i + 1 < orbit_param_count(types[o]); ++i)
                orb.params.push_back(-delta * frac[static_cast<std::size_t>(i)]);
            orb.params.push_back(delta);
            orb.weight = 1.0;
            out.push_back(std::move(orb));
        }
        return out;
    }
    std::uniform_real_distribution<double> unit(1e-3, 1.0 - 1e-3);
    for (auto t : types) {
        SymmetryOrbit orb;
        orb.type = t;
        const double delta = -std::cbrt(unit(rng));
        for (int i = 0; i + 1 < orbit_param_count(t); ++i)
            orb.params.push_back(-delta * unit(rng));
        orb.params.push_back(delta);
        orb.weight = 1.0;
        out.push_back(std::move(orb));
    }
    return out;
}

/// Number of reduced moment equations (constant mode included).
inline int symmetric_equation_count(int p)
{
    return static_cast<int>(symmetric_modes(p).size());
}

/// Decompositions of n worth trying for strength p, in a seeded shuffle.
inline std::vector<Decomposition> candidate_decompositions(int n, const SearchConfig& config)
{
    const int eqs = symmetric_equation_count(config.strength);
    const int min_orbits = (config.strength + 2) / 2;
    std::vector<Decomposition> out;
    for (const auto& d : enumerate_decompositions(n)) {
        if (d.unknowns() < eqs || d.unknowns() > eqs + config.max_extra_unknowns)
            continue;
        if (d.orbit_count() < min_orbits)
            continue;
        out.push_back(d);
    }
    std::seed_seq seq{static_cast<std::uint64_t>(config.seed), static_cast<std::uint64_t>(n), std::uint64_t{0x5eed}};
    std::mt19937_64 rng(seq);
    std::shuffle(out.begin(), out.end(), rng);
    // Prefer square systems; stable so the shuffle breaks ties.
    std::stable_sort(out.begin(), out.end(),
                     [](const Decomposition& a, const Decomposition& b) { return a.unknowns() < b.unknowns(); });
    return out;
}

/// Sweeps N upwards from config.min_points and returns every rule found
/// (minimum N first). With stop_at_first the sweep ends at the first N that
/// yields a rule. Output is a pure function of config unless the wall-clock
/// budget cuts the sweep short.
inline SearchOutcome search(const SearchConfig& config,
                            const std::function<void(const SearchLogEntry&)>& on_attempt = {})
{
    SearchOutcome outcome;
    const auto start = std::chrono::steady_clock::now();
    long attempts = 0;
    auto out_of_budget = [&] {
        if (config.max_attempts >= 0 && attempts >= config.max_attempts)
            return true;
        const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
        return el.count() > config.budget_seconds;
    };
    for (int n = std::max(1, config.min_points); n <= config.max_points; ++n) {
        const auto decs = candidate_decompositions(n, config);
        bool found = false;
        // Restart-major order: every decomposition gets restart r before any
        // gets r + 1, so a large restart count does not starve the later ones.
        for (int r = 0; r < config.restarts && !(found && config.stop_at_first); ++r) {
            for (std::size_t di = 0; di < decs.size(); ++di) {
                if (out_of_budget()) {
                    outcome.budget_exhausted = true;
                    return outcome;
                }
                std::seed_seq seq{static_cast<std::uint64_t>(config.seed), static_cast<std::uint64_t>(n),
                                  static_cast<std::uint64_t>(di), static_cast<std::uint64_t>(r)};
                std::mt19937_64 rng(seq);
                const auto guess = initial_guess(decs[di], r, rng);
                const auto res = refine_rule(decs[di], guess, config);
                ++attempts;
                SearchLogEntry entry{n, decs[di].to_string(), r, res.residual, res.status};
                outcome.log.push_back(entry);
                if (on_attempt)
                    on_attempt(entry);
                if (res.rule) {
                    outcome.rules.push_back(*res.rule);
                    found = true;
                    if (config.stop_at_first)
                        break;
                }
            }
        }
        if (found && config.stop_at_first)
            break;
    }
    return outcome;
}

} // namespace hybrid4

namespace hybrid4 {

// ---------------------------------------------------------------------------
// Conical product rule
//
// With x4 = -t and (x1, x2, x3) = t s, the integral over K* becomes
// int_0^1 t^3 int_[-1,1]^3 f(t s, -t) ds dt. Gauss-Jacobi in t and
// Gauss-Legendre in each s_c, n = ceil((p + 1) / 2) points per direction,
// integrate every polynomial of degree p exactly. The rule is symmetric,
// strictly interior and positive, but has n^4 points.

inline QuadratureRule conical_product_rule(int p)
{
    if (p < 0)
        throw Error(ErrorCode::InvalidParams, "strength must be non-negative");
    const int n = std::max(1, (p + 2) / 2);
    const Rule1D gj = gauss_jacobi(n, 0.0, 3.0);
    const Rule1D gl = gauss_legendre(n);

    // Non-negative Legendre nodes with their weights.
    std::vector<std::pair<double, double>> half;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        if (gl.nodes[i] >= 0.0)
            half.emplace_back(std::abs(gl.nodes[i]) < 1e-15 ? 0.0 : gl.nodes[i], gl.weights[i]);
    std::sort(half.begin(), half.end());

    std::vector<SymmetryOrbit> orbits;
    for (std::size_t k = 0; k < gj.nodes.size(); ++k) {
        const double t = 0.5 * (1.0 + gj.nodes[k]);
        const double wt = gj.weights[k] / 16.0;
        for (std::size_t a = 0; a < half.size(); ++a)
            for (std::size_t b = a; b < half.size(); ++b)
                for (std::size_t c = b; c < half.size(); ++c) {
                    const double va = half[a].first, vb = half[b].first, vc = half[c].first;
                    SymmetryOrbit o;
                    o.weight = wt * half[a].second * half[b].second * half[c].second;
                    const int zeros = (va == 0.0) + (vb == 0.0) + (vc == 0.0);
                    if (zeros == 3)
                        o.type = OrbitType::S1;
                    else if (zeros == 2)
                        o = {OrbitType::S2, {t * vc}, o.weight};
                    else if (zeros == 1)
                        o = b == c ? SymmetryOrbit{OrbitType::S4, {t * vc}, o.weight}
                                   : SymmetryOrbit{OrbitType::S5, {t * vb, t * vc}, o.weight};
                    else if (a == c)
                        o = {OrbitType::S3, {t * va}, o.weight};
                    else if (a == b)
                        o = {OrbitType::S6, {t * va, t * vc}, o.weight};
                    else if (b == c)
                        o = {OrbitType::S6, {t * vc, t * va}, o.weight};
                    else
                        o = {OrbitType::S7, {t * va, t * vb, t * vc}, o.weight};
                    o.params.push_back(-t);
                    orbits.push_back(std::move(o));
                }
    }
    return QuadratureRule(p, std::move(orbits));
}

} // namespace hybrid4
