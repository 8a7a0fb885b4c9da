#include "gdsq/genericity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gdsq/common.hpp"
#include "gdsq/parallel.hpp"

namespace gdsq {
namespace {

MarginQuantiles quantiles_of(std::vector<double> margins) {
    MarginQuantiles q;
    if (margins.empty()) return q;
    std::sort(margins.begin(), margins.end());
    const auto at = [&](double frac) {
        const double h = frac * static_cast<double>(margins.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(h);
        const std::size_t hi = std::min(lo + 1, margins.size() - 1);
        const double w = h - static_cast<double>(lo);
        return (1.0 - w) * margins[lo] + w * margins[hi];
    };
    q.min = margins.front();
    q.q25 = at(0.25);
    q.median = at(0.5);
    q.q75 = at(0.75);
    q.max = margins.back();
    return q;
}

void require_square(const CoefficientMatrix& a, int m) {
    if (a.rows() != m || a.cols() != m)
        fail("coefficient matrix is ", a.rows(), "x", a.cols(),
             " but the equidimensional target needs ", m, "x", m);
}

// Shared MC loop; `run_trial` maps a sampled p to (margin, verdict).
template <class Trial>
MonteCarloSummary run_mc(const char* theorem, const ParamManifold& f, const McOptions& opts,
                         Trial&& run_trial) {
    if (opts.trials < 1) fail("trials must be positive, got ", opts.trials);
    MonteCarloSummary s;
    s.theorem = theorem;
    s.manifold = f.name;
    s.trials = opts.trials;
    s.seed = opts.seed;
    s.dist = opts.dist;
    s.margins.assign(static_cast<std::size_t>(opts.trials), 0.0);
    s.verdicts.assign(static_cast<std::size_t>(opts.trials), McVerdict::Inconclusive);

    const int m = f.ambient_dim;
    parallel_for(static_cast<std::size_t>(opts.trials), [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng(opts.seed, static_cast<std::uint64_t>(t));
            const CentralPoints p = sample_central_points(m, opts.dist, rng);
            run_trial(p, s.margins[t], s.verdicts[t]);
        }
    });

    for (const McVerdict v : s.verdicts) {
        if (v == McVerdict::Pass)
            ++s.passes;
        else if (v == McVerdict::Fail)
            ++s.failures;
        else
            ++s.inconclusive;
    }
    s.quantiles = quantiles_of(s.margins);
    return s;
}

}  // namespace

Dist gaussian_dist(double mean, double stddev) {
    if (!(stddev > 0.0)) fail("gaussian stddev must be positive, got ", stddev);
    Dist d;
    d.kind = Dist::Kind::Gaussian;
    d.mean = mean;
    d.stddev = stddev;
    return d;
}

Dist uniform_dist(double lo, double hi) {
    if (!(hi > lo)) fail("uniform range needs lo < hi, got [", lo, ", ", hi, "]");
    Dist d;
    d.kind = Dist::Kind::Uniform;
    d.lo = lo;
    d.hi = hi;
    return d;
}

std::string to_string(const Dist& d) {
    std::ostringstream out;
    if (d.kind == Dist::Kind::Gaussian)
        out << "gaussian(" << d.mean << "," << d.stddev << ")";
    else
        out << "uniform(" << d.lo << "," << d.hi << ")";
    return out.str();
}

Dist parse_dist(const std::string& text) {
    const auto open = text.find('(');
    const auto comma = text.find(',', open == std::string::npos ? 0 : open);
    const auto close = text.rfind(')');
    if (open == std::string::npos || comma == std::string::npos || close == std::string::npos ||
        !(open < comma && comma < close) || close + 1 != text.size())
        fail("malformed distribution descriptor '", text,
             "'; expected gaussian(mean,stddev) or uniform(lo,hi)");
    const std::string name = text.substr(0, open);
    double first = 0.0, second = 0.0;
    try {
        std::size_t used = 0;
        const std::string a = text.substr(open + 1, comma - open - 1);
        const std::string b = text.substr(comma + 1, close - comma - 1);
        first = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        second = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::exception&) {
        fail("malformed distribution descriptor '", text, "': numeric arguments expected");
    }
    if (name == "gaussian") return gaussian_dist(first, second);
    if (name == "uniform") return uniform_dist(first, second);
    fail("unknown distribution '", name, "'; expected gaussian or uniform");
}

CentralPoints sample_central_points(int m, const Dist& dist, Rng& rng) {
    if (m < 1) fail("dimension must be positive, got ", m);
    Eigen::MatrixXd p(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            p(i, j) = dist.kind == Dist::Kind::Gaussian
                          ? rng.gaussian(dist.mean, dist.stddev)
                          : dist.lo + (dist.hi - dist.lo) * rng.uniform01();
    return CentralPoints(std::move(p));
}

CentralPoints perturb_points(const CentralPoints& p, double stddev, Rng& rng) {
    Eigen::MatrixXd out = p.matrix();
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) += rng.gaussian(0.0, stddev);
    return CentralPoints(std::move(out));
}

const char* to_string(McVerdict v) {
    switch (v) {
        case McVerdict::Pass: return "pass";
        case McVerdict::Fail: return "fail";
        default: return "inconclusive";
    }
}

MonteCarloSummary mc_genericity_immersion(const ParamManifold& f, const CoefficientMatrix& a,
                                          const McOptions& opts) {
    const int m = f.ambient_dim;
    const int n = f.param_dim();
    require_square(a, m);
    if (m < 2 * n && !opts.override_hypothesis)
        fail("immersion genericity needs m >= 2n (m = ", m, ", n = ", n,
             "); set the override to explore outside the hypothesis");
    return run_mc("immersion", f, opts,
                  [&](const CentralPoints& p, double& margin, McVerdict& verdict) {
                      const GdsMap g(a, p);
                      const RankReport rep = immersion_check(g, f, opts.rank, opts.tol);
                      margin = rep.sigma_min;
                      verdict = rep.verdict == RankVerdict::Immersion  ? McVerdict::Pass
                                : rep.verdict == RankVerdict::RankDrop ? McVerdict::Fail
                                                                       : McVerdict::Inconclusive;
                  });
}

MonteCarloSummary mc_genericity_injectivity(const ParamManifold& f, const CoefficientMatrix& a,
                                            const McOptions& opts) {
    const int m = f.ambient_dim;
    const int n = f.param_dim();
    require_square(a, m);
    if (m < 2 * n + 1 && !opts.override_hypothesis)
        fail("injectivity genericity needs m >= 2n+1 (m = ", m, ", n = ", n,
             "); set the override to explore outside the hypothesis");
    return run_mc("injectivity", f, opts,
                  [&](const CentralPoints& p, double& margin, McVerdict& verdict) {
                      const GdsMap g(a, p);
                      const CollisionReport rep = injectivity_check(g, f, opts.gap, opts.tol);
                      margin = rep.image_gap;
                      verdict = rep.verdict == CollisionVerdict::Injective  ? McVerdict::Pass
                                : rep.verdict == CollisionVerdict::Collision ? McVerdict::Fail
                                                                             : McVerdict::Inconclusive;
                  });
}

CentralPoints construct_bad_p_immersion(const ParamManifold& f, const Eigen::VectorXd& q0) {
    const Eigen::VectorXd y = eval_manifold(f, q0);
    Eigen::MatrixXd p(f.ambient_dim, f.ambient_dim);
    for (int i = 0; i < f.ambient_dim; ++i) p.row(i) = y.transpose();
    return CentralPoints(std::move(p));
}

CentralPoints construct_bad_p_injectivity(const ParamManifold& f, const Eigen::VectorXd& q1,
                                          const Eigen::VectorXd& q2) {
    const Eigen::VectorXd y1 = eval_manifold(f, q1);
    const Eigen::VectorXd y2 = eval_manifold(f, q2);
    if ((y1 - y2).norm() == 0.0)
        fail("f(q1) = f(q2): the pair is already a collision of f itself; no construction needed");
    const Eigen::VectorXd mid = 0.5 * (y1 + y2);
    Eigen::MatrixXd p(f.ambient_dim, f.ambient_dim);
    for (int i = 0; i < f.ambient_dim; ++i) p.row(i) = mid.transpose();
    return CentralPoints(std::move(p));
}

}  // namespace gdsq
