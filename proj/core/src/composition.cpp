#include "gdsq/composition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gdsq/common.hpp"
#include "gdsq/linalg.hpp"
#include "gdsq/parallel.hpp"

namespace gdsq {
namespace {

// Uniform product grid. Periodic axes take N samples lo + i L / N (hi is the
// same point); box axes take N + 1 samples including both endpoints. Doubling
// N keeps every old sample, so coarse screen minima never beat finer ones.
struct GridSpec {
    const ParamDomain* dom;
    std::vector<int> cells;
    std::vector<int> pts;
    std::vector<double> step;
    std::size_t total = 1;

    GridSpec(const ParamDomain& d, const std::vector<int>& res) : dom(&d), cells(res) {
        const int n = d.dim();
        if (static_cast<int>(res.size()) != n)
            fail("grid has ", res.size(), " entries for a ", n, "-dimensional domain");
        pts.resize(static_cast<std::size_t>(n));
        step.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            const Axis& ax = d.axis(k);
            const int cells_k = res[static_cast<std::size_t>(k)];
            if (cells_k < 1) fail("grid resolution must be at least 1, got ", cells_k);
            step[static_cast<std::size_t>(k)] = (ax.hi - ax.lo) / cells_k;
            pts[static_cast<std::size_t>(k)] = ax.periodic ? cells_k : cells_k + 1;
            total *= static_cast<std::size_t>(pts[static_cast<std::size_t>(k)]);
        }
    }

    // Row-major decode, last axis fastest.
    Eigen::VectorXd point(std::size_t index) const {
        const int n = static_cast<int>(pts.size());
        Eigen::VectorXd q(n);
        for (int k = n - 1; k >= 0; --k) {
            const std::size_t p = static_cast<std::size_t>(pts[static_cast<std::size_t>(k)]);
            q[k] = dom->axis(k).lo +
                   step[static_cast<std::size_t>(k)] * static_cast<double>(index % p);
            index /= p;
        }
        return q;
    }
};

// Wrap periodic coordinates, clamp box coordinates. Used by the local
// optimizers, which may step outside the domain.
Eigen::VectorXd clamp_wrap(const ParamDomain& dom, Eigen::VectorXd q) {
    for (int k = 0; k < dom.dim(); ++k) {
        const Axis& ax = dom.axis(k);
        if (ax.periodic) {
            const double len = ax.hi - ax.lo;
            double t = std::fmod(q[k] - ax.lo, len);
            if (t < 0.0) t += len;
            q[k] = ax.lo + t;
        } else {
            q[k] = std::clamp(q[k], ax.lo, ax.hi);
        }
    }
    return q;
}

struct LocalBest {
    double value;
    Eigen::VectorXd q;
};

// Pattern search: 5 samples per axis around the incumbent, contract by 4.
// After `rounds` rounds the bracket width shrinks by 4^rounds.
LocalBest refine_min(const ParamDomain& dom, const std::function<double(const Eigen::VectorXd&)>& obj,
                     const Eigen::VectorXd& q0, double v0, const std::vector<double>& step,
                     int rounds) {
    static constexpr double kOffsets[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    const int n = dom.dim();
    LocalBest best{v0, q0};
    std::vector<double> h = step;
    for (int r = 0; r < rounds; ++r) {
        const Eigen::VectorXd center = best.q;
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        while (true) {
            Eigen::VectorXd q = center;
            bool at_center = true;
            for (int k = 0; k < n; ++k) {
                const double off = kOffsets[idx[static_cast<std::size_t>(k)]];
                q[k] += off * h[static_cast<std::size_t>(k)];
                at_center = at_center && off == 0.0;
            }
            if (!at_center) {
                q = clamp_wrap(dom, q);
                const double v = obj(q);
                if (v < best.value) best = {v, q};
            }
            int k = n - 1;
            while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == 5) idx[static_cast<std::size_t>(k--)] = 0;
            if (k < 0) break;
        }
        for (double& hk : h) hk *= 0.25;
    }
    return best;
}

RankVerdict rank_verdict(double sigma, double scale, const Tolerances& tol) {
    if (sigma < tol.tol_rank * scale) return RankVerdict::RankDrop;
    if (sigma > tol.tol_margin * scale) return RankVerdict::Immersion;
    return RankVerdict::Inconclusive;
}

CollisionVerdict gap_verdict(double gap, double scale, const Tolerances& tol) {
    if (gap < tol.tol_collision * scale) return CollisionVerdict::Collision;
    if (gap > tol.tol_margin * scale) return CollisionVerdict::Injective;
    return CollisionVerdict::Inconclusive;
}

void check_composable(const GdsMap& g, const ParamManifold& f) {
    if (!g.equidimensional())
        fail("composition checks need an equidimensional map; this one sends R^", g.ambient_dim(),
             " to R^", g.components());
    if (f.ambient_dim != static_cast<int>(g.ambient_dim()))
        fail("manifold '", f.name, "' lives in R^", f.ambient_dim, " but the map acts on R^",
             g.ambient_dim());
}

// Move both points apart along the shortest wrapped difference until their
// separation reaches delta again. Returns false when the pair cannot be
// repaired (coincident points or clamping undoes the push).
bool restore_separation(const ParamDomain& dom, Eigen::VectorXd& q, Eigen::VectorXd& qp,
                        double delta) {
    const double sep = dom.separation(q, qp);
    if (sep >= delta * (1.0 - 1e-12)) return true;
    Eigen::VectorXd diff = dom.wrapped_difference(q, qp);
    const double len = diff.norm();
    if (!(len > 1e-300)) return false;
    const double shift = 0.5 * (delta - sep) * (1.0 + 1e-9) / len;
    q = clamp_wrap(dom, q + shift * diff);
    qp = clamp_wrap(dom, qp - shift * diff);
    return dom.separation(q, qp) >= delta * (1.0 - 1e-9);
}

}  // namespace

const char* to_string(RankVerdict v) {
    switch (v) {
        case RankVerdict::Immersion: return "immersion";
        case RankVerdict::RankDrop: return "rank_drop";
        default: return "inconclusive";
    }
}

const char* to_string(CollisionVerdict v) {
    switch (v) {
        case CollisionVerdict::Injective: return "injective";
        case CollisionVerdict::Collision: return "collision";
        default: return "inconclusive";
    }
}

std::vector<int> resolve_grid(const std::vector<int>& requested, int n) {
    if (n < 1) fail("domain dimension must be positive, got ", n);
    std::vector<int> grid = requested;
    if (grid.empty()) {
        const int per_axis = n == 1 ? 4096 : n == 2 ? 128 : 16;
        grid.assign(static_cast<std::size_t>(n), per_axis);
    } else if (grid.size() == 1 && n > 1) {
        grid.assign(static_cast<std::size_t>(n), grid[0]);
    } else if (static_cast<int>(grid.size()) != n) {
        fail("grid needs 1 or ", n, " entries, got ", grid.size());
    }
    for (int g : grid)
        if (g < 1) fail("grid resolution must be at least 1, got ", g);
    return grid;
}

Eigen::MatrixXd composition_jacobian(const GdsMap& g, const ParamManifold& f,
                                     const Eigen::VectorXd& q) {
    check_composable(g, f);
    const Eigen::VectorXd qc = f.domain.wrap(q);
    f.domain.require_inside(qc);
    return g.jacobian(f.value(qc)) * f.jacobian(qc);
}

Eigen::VectorXd composed_value(const GdsMap& g, const ParamManifold& f, const Eigen::VectorXd& q) {
    check_composable(g, f);
    return g.eval(eval_manifold(f, q));
}

Eigen::VectorXd gamma_pair(const GdsMap& g, const ParamManifold& f, const Eigen::VectorXd& q,
                           const Eigen::VectorXd& q_prime) {
    const Eigen::VectorXd a = composed_value(g, f, q);
    const Eigen::VectorXd b = composed_value(g, f, q_prime);
    Eigen::VectorXd out(a.size() + b.size());
    out << a, b;
    return out;
}

MinSigmaScan scan_min_singular(const ParamDomain& domain, const JacobianFn& jac,
                               const std::vector<int>& grid, int refine_rounds) {
    const GridSpec gs(domain, grid);
    std::vector<double> values(gs.total);
    parallel_for(gs.total, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            values[i] = smallest_singular_value(jac(gs.point(i)));
    });

    MinSigmaScan out;
    out.grid = grid;

    // Total order (value, index): ties go to the first grid point.
    auto better = [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return a < b;
    };
    std::vector<std::size_t> order(gs.total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t keep = std::min(gs.total, (gs.total + 99) / 100);
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                     better);
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), better);

    out.screen_min = values[order[0]];
    LocalBest best{values[order[0]], gs.point(order[0])};
    if (refine_rounds > 0) {
        const auto obj = [&](const Eigen::VectorXd& q) {
            return smallest_singular_value(jac(q));
        };
        for (std::size_t c = 0; c < keep; ++c) {
            const LocalBest r =
                refine_min(domain, obj, gs.point(order[c]), values[order[c]], gs.step, refine_rounds);
            if (r.value < best.value) best = r;
        }
    }
    out.refined_min = best.value;
    out.witness = best.q;
    out.values = std::move(values);
    return out;
}

MinGapScan scan_min_gap(const ParamDomain& domain, const ValueFn& value, const JacobianFn& jac,
                        int ambient_dim, const GapScanOptions& opts) {
    if (!(opts.delta > 0.0)) fail("delta must be positive, got ", opts.delta);
    const double diam = domain.diameter();
    if (opts.delta > diam)
        fail("delta ", opts.delta, " exceeds the domain diameter ", diam,
             "; every pair would be excluded");

    const int n = domain.dim();
    const GridSpec gs(domain, opts.grid);
    Eigen::MatrixXd img(ambient_dim, static_cast<Eigen::Index>(gs.total));
    Eigen::MatrixXd qs(n, static_cast<Eigen::Index>(gs.total));
    parallel_for(gs.total, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Eigen::VectorXd q = gs.point(i);
            qs.col(static_cast<Eigen::Index>(i)) = q;
            img.col(static_cast<Eigen::Index>(i)) = value(q);
        }
    });

    const double* base = img.data();
    const int m = ambient_dim;
    const auto gap2 = [base, m](std::size_t i, std::size_t j) {
        const double* a = base + i * static_cast<std::size_t>(m);
        const double* b = base + j * static_cast<std::size_t>(m);
        double s = 0.0;
        for (int c = 0; c < m; ++c) {
            const double d = a[c] - b[c];
            s += d * d;
        }
        return s;
    };

    struct Cand {
        double g2;
        std::size_t i, j;
    };
    const auto cand_less = [](const Cand& a, const Cand& b) {
        if (a.g2 != b.g2) return a.g2 < b.g2;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    };
    const std::size_t want = std::max<std::size_t>(1, static_cast<std::size_t>(opts.starts));
    std::vector<Cand> heap;  // max-heap under cand_less, keeps the `want` smallest
    heap.reserve(want + 1);
    const auto consider = [&](double g2v, std::size_t i, std::size_t j) {
        const Cand c{g2v, i, j};
        if (heap.size() < want) {
            heap.push_back(c);
            std::push_heap(heap.begin(), heap.end(), cand_less);
        } else if (cand_less(c, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), cand_less);
            heap.back() = c;
            std::push_heap(heap.begin(), heap.end(), cand_less);
        }
    };

    // Screen every grid pair with separation >= delta. Separation on the grid
    // reduces to index offsets when n = 1, which keeps the j-range contiguous.
    if (n == 1) {
        const double h = gs.step[0];
        const std::size_t P = gs.total;
        std::size_t kmin = static_cast<std::size_t>(std::ceil(opts.delta / h - 1e-12));
        if (kmin < 1) kmin = 1;
        if (domain.axis(0).periodic) {
            const std::size_t N = P;
            for (std::size_t i = 0; i + kmin < N; ++i) {
                const std::size_t jhi = std::min(N - 1, i + (N - kmin));
                for (std::size_t j = i + kmin; j <= jhi; ++j) consider(gap2(i, j), i, j);
            }
        } else {
            for (std::size_t i = 0; i + kmin < P; ++i)
                for (std::size_t j = i + kmin; j < P; ++j) consider(gap2(i, j), i, j);
        }
    } else {
        for (std::size_t i = 0; i < gs.total; ++i) {
            const Eigen::VectorXd qi = qs.col(static_cast<Eigen::Index>(i));
            for (std::size_t j = i + 1; j < gs.total; ++j) {
                if (domain.separation(qi, qs.col(static_cast<Eigen::Index>(j))) < opts.delta)
                    continue;
                consider(gap2(i, j), i, j);
            }
        }
    }
    if (heap.empty())
        fail("no grid pair satisfies the separation bound delta = ", opts.delta,
             "; refine the grid or lower delta");
    std::sort(heap.begin(), heap.end(), cand_less);

    MinGapScan out;
    out.grid = opts.grid;
    out.screen_min = std::sqrt(heap.front().g2);

    // Local descent from each screen candidate: projected gradient on
    // |c(q) - c(q')|^2 with Armijo backtracking; the projection wraps, clamps,
    // and restores the separation constraint.
    struct PairBest {
        double g2;
        Eigen::VectorXd q, qp;
    };
    PairBest best{heap.front().g2, qs.col(static_cast<Eigen::Index>(heap.front().i)),
                  qs.col(static_cast<Eigen::Index>(heap.front().j))};
    double min_len = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) min_len = std::min(min_len, domain.axis(k).hi - domain.axis(k).lo);
    const double trust = 0.1 * min_len;

    for (const Cand& c : heap) {
        Eigen::VectorXd q = qs.col(static_cast<Eigen::Index>(c.i));
        Eigen::VectorXd qp = qs.col(static_cast<Eigen::Index>(c.j));
        double g = c.g2;
        for (int it = 0; it < opts.descent_max_iters; ++it) {
            const Eigen::VectorXd d = value(q) - value(qp);
            const Eigen::VectorXd grad_q = 2.0 * (jac(q).transpose() * d);
            const Eigen::VectorXd grad_p = -2.0 * (jac(qp).transpose() * d);
            const double gn2 = grad_q.squaredNorm() + grad_p.squaredNorm();
            if (gn2 < 1e-30) break;
            double alpha = trust / std::sqrt(gn2);
            bool accepted = false;
            for (int bt = 0; bt < 30; ++bt, alpha *= 0.5) {
                Eigen::VectorXd nq = clamp_wrap(domain, q - alpha * grad_q);
                Eigen::VectorXd np = clamp_wrap(domain, qp - alpha * grad_p);
                if (!restore_separation(domain, nq, np, opts.delta)) continue;
                const double ng = (value(nq) - value(np)).squaredNorm();
                if (ng <= g - 1e-4 * alpha * gn2) {
                    q = std::move(nq);
                    qp = std::move(np);
                    g = ng;
                    accepted = true;
                    break;
                }
            }
            if (!accepted || g < 1e-32) break;
        }
        if (g < best.g2) best = {g, q, qp};
    }

    out.refined_min = std::sqrt(best.g2);
    out.q = best.q;
    out.q_prime = best.qp;
    out.separation = domain.separation(best.q, best.qp);
    return out;
}

double image_scale_estimate(const GdsMap& g, const ParamManifold& f) {
    check_composable(g, f);
    const int n = f.param_dim();
    const std::vector<int> coarse(static_cast<std::size_t>(n), n == 1 ? 64 : 16);
    const GridSpec gs(f.domain, coarse);
    Eigen::VectorXd lo, hi;
    for (std::size_t i = 0; i < gs.total; ++i) {
        const Eigen::VectorXd y = g.eval(f.value(gs.point(i)));
        if (i == 0) {
            lo = y;
            hi = y;
        } else {
            lo = lo.cwiseMin(y);
            hi = hi.cwiseMax(y);
        }
    }
    const double diag = (hi - lo).norm();
    const double amax = g.coefficients().matrix().cwiseAbs().maxCoeff();
    return std::max({1.0, amax, diag});
}

RankReport immersion_check(const GdsMap& g, const ParamManifold& f, const RankScanOptions& opts,
                           const Tolerances& tol) {
    check_composable(g, f);
    const std::vector<int> grid = resolve_grid(opts.grid, f.param_dim());
    const JacobianFn jac = [&g, &f](const Eigen::VectorXd& q) -> Eigen::MatrixXd {
        return g.jacobian(f.value(q)) * f.jacobian(q);
    };
    MinSigmaScan scan = scan_min_singular(f.domain, jac, grid, opts.refine_rounds);

    RankReport rep;
    rep.grid = grid;
    rep.sigma_min = scan.refined_min;
    rep.sigma_min_screen = scan.screen_min;
    rep.witness = scan.witness;
    rep.refined = opts.refine_rounds > 0;
    rep.scale = image_scale_estimate(g, f);
    rep.tolerances = tol;
    rep.verdict = rank_verdict(rep.sigma_min, rep.scale, tol);
    rep.grid_values = std::move(scan.values);
    return rep;
}

CollisionReport injectivity_check(const GdsMap& g, const ParamManifold& f,
                                  const GapScanOptions& opts, const Tolerances& tol) {
    check_composable(g, f);
    GapScanOptions eff = opts;
    eff.grid = resolve_grid(opts.grid, f.param_dim());
    const ValueFn value = [&g, &f](const Eigen::VectorXd& q) -> Eigen::VectorXd {
        return g.eval(f.value(q));
    };
    const JacobianFn jac = [&g, &f](const Eigen::VectorXd& q) -> Eigen::MatrixXd {
        return g.jacobian(f.value(q)) * f.jacobian(q);
    };
    const MinGapScan scan = scan_min_gap(f.domain, value, jac, static_cast<int>(g.components()), eff);

    CollisionReport rep;
    rep.grid = eff.grid;
    rep.q = scan.q;
    rep.q_prime = scan.q_prime;
    rep.image_gap = scan.refined_min;
    rep.image_gap_screen = scan.screen_min;
    rep.separation = scan.separation;
    rep.delta = eff.delta;
    rep.scale = image_scale_estimate(g, f);
    rep.tolerances = tol;
    rep.verdict = gap_verdict(rep.image_gap, rep.scale, tol);
    return rep;
}

EmbeddingReport injective_immersion_check(const GdsMap& g, const ParamManifold& f,
                                          const RankScanOptions& rank_opts,
                                          const GapScanOptions& gap_opts, const Tolerances& tol) {
    EmbeddingReport rep;
    rep.rank = immersion_check(g, f, rank_opts, tol);
    rep.collision = injectivity_check(g, f, gap_opts, tol);
    rep.embedding_candidate = rep.rank.verdict == RankVerdict::Immersion &&
                              rep.collision.verdict == CollisionVerdict::Injective;
    return rep;
}

}  // namespace gdsq
