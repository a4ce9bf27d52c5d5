#include "gptnc/embed.hpp"

#include "gptnc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <thread>

#include <boost/dynamic_bitset.hpp>

namespace gptnc::embed {

namespace {

Rational abs_q(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

Matrix rows_of(const std::vector<Vector>& rows, std::size_t cols) { return Matrix::from_rows(rows, cols); }

std::vector<Vector> apply_all(const Matrix& m, const std::vector<Vector>& pts) {
    std::vector<Vector> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(m.apply(p));
    return out;
}

} // namespace

Accessible accessible_space(const Gpt& g) {
    if (g.states.vertices.empty() || g.effects.vertices.empty())
        throw NonPolytopic("state and effect bodies need finite, nonempty vertex lists");
    const std::size_t n = g.dim;
    Accessible acc;
    const auto& s = g.states.vertices;
    const auto& e = g.effects.vertices;
    if (rank(s, n) == n && rank(e, n) == n) {
        acc.dim = n;
        acc.state_map = Matrix::identity(n);
        acc.effect_map = Matrix::identity(n);
        acc.states = s;
        acc.effects = e;
        acc.unit = g.unit;
        return acc;
    }
    // Restrict to span(Ω), then to the span of the effects' action on it.
    std::vector<Vector> q_rows;
    for (auto i : independent_subset(s, n)) q_rows.push_back(s[i]);
    Matrix q = rows_of(q_rows, n);
    auto g_inv = inverse(q * q.transpose());
    Matrix effect_on_span = *g_inv * q;  // e -> G^{-1} Q e
    auto a = apply_all(effect_on_span, e);
    std::vector<Vector> r_rows;
    for (auto i : independent_subset(a, q_rows.size())) r_rows.push_back(a[i]);
    if (r_rows.empty()) throw DegenerateBody("effects vanish on every state");
    Matrix r = rows_of(r_rows, q_rows.size());
    auto rr_inv = inverse(r * r.transpose());
    acc.dim = r_rows.size();
    acc.reduced = true;
    acc.state_map = r * q;
    acc.effect_map = *rr_inv * r * effect_on_span;
    acc.states = apply_all(acc.state_map, s);
    acc.effects = apply_all(acc.effect_map, e);
    acc.unit = acc.effect_map.apply(g.unit);
    return acc;
}

std::size_t PairDecomposition::support() const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < alpha.rows(); ++i)
        for (std::size_t j = 0; j < alpha.cols(); ++j)
            if (sgn(alpha(i, j)) > 0) ++k;
    return k;
}

bool is_valid(const PairDecomposition& pd) {
    if (pd.alpha.rows() != pd.v_list.size() || pd.alpha.cols() != pd.h_list.size()) return false;
    Matrix sum(pd.dim, pd.dim);
    for (std::size_t i = 0; i < pd.v_list.size(); ++i)
        for (std::size_t j = 0; j < pd.h_list.size(); ++j) {
            const Rational& w = pd.alpha(i, j);
            if (sgn(w) < 0) return false;
            if (sgn(w) == 0) continue;
            for (std::size_t p = 0; p < pd.dim; ++p)
                for (std::size_t q = 0; q < pd.dim; ++q) sum(p, q) += w * pd.v_list[i][p] * pd.h_list[j][q];
        }
    return sum == Matrix::identity(pd.dim);
}

namespace {

std::vector<Vector> k_e_vertices(const Accessible& acc) {
    std::vector<Vector> normals;
    for (const auto& a : acc.effects) {
        if (!is_zero(a)) normals.push_back(a);
        Vector rest = acc.unit - a;
        if (!is_zero(rest)) normals.push_back(rest);
    }
    auto rays = geometry::extreme_rays_of(normals, acc.dim);
    std::vector<Vector> verts;
    for (auto& r : rays) {
        Rational t = dot(acc.unit, r);
        if (sgn(t) <= 0) throw DegenerateBody("effect-dual cone has a ray orthogonal to the unit");
        verts.push_back(Rational(1 / t) * r);
    }
    std::sort(verts.begin(), verts.end());
    return verts;
}

std::vector<Vector> state_dual_rays(const Accessible& acc) {
    auto rays = geometry::extreme_rays_of(acc.states, acc.dim);
    for (auto& h : rays) {
        Rational top = 0;
        for (const auto& s : acc.states) top = std::max(top, dot(h, s));
        if (sgn(top) > 0) h = Rational(1 / top) * h;
    }
    return rays;
}

lp::Problem<Rational> pair_lp(const std::vector<Vector>& v_list, const std::vector<Vector>& h_list,
                              std::size_t dim, const std::vector<bool>* allowed = nullptr) {
    lp::Problem<Rational> p;
    p.num_vars = v_list.size() * h_list.size();
    p.a.assign(dim * dim, std::vector<Rational>(p.num_vars));
    p.b.assign(dim * dim, Rational(0));
    for (std::size_t i = 0; i < v_list.size(); ++i)
        for (std::size_t j = 0; j < h_list.size(); ++j) {
            std::size_t col = i * h_list.size() + j;
            if (allowed && !(*allowed)[col]) continue;
            for (std::size_t r = 0; r < dim; ++r) {
                if (sgn(v_list[i][r]) == 0) continue;
                for (std::size_t c = 0; c < dim; ++c)
                    if (sgn(h_list[j][c]) != 0) p.a[r * dim + c][col] = v_list[i][r] * h_list[j][c];
            }
        }
    for (std::size_t r = 0; r < dim; ++r) p.b[r * dim + r] = 1;
    return p;
}

Matrix alpha_from(const std::vector<Rational>& x, std::size_t nv, std::size_t nh) {
    Matrix a(nv, nh);
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nh; ++j) a(i, j) = x[i * nh + j];
    return a;
}

} // namespace

EmbeddingLp build_embedding_lp(const Gpt& g) {
    EmbeddingLp out;
    out.space = accessible_space(g);
    out.v_list = k_e_vertices(out.space);
    out.h_list = state_dual_rays(out.space);
    out.problem = pair_lp(out.v_list, out.h_list, out.space.dim);
    return out;
}

OntologicalModel model_from_decomposition(const PairDecomposition& pd, const Accessible& space) {
    std::vector<Vector> mu_rows, xi_rows;
    for (std::size_t i = 0; i < pd.v_list.size(); ++i)
        for (std::size_t j = 0; j < pd.h_list.size(); ++j) {
            const Rational& w = pd.alpha(i, j);
            if (sgn(w) <= 0) continue;
            mu_rows.push_back(w * pd.h_list[j]);
            xi_rows.push_back(pd.v_list[i]);
        }
    OntologicalModel m;
    m.d = mu_rows.size();
    m.mu_map = rows_of(mu_rows, pd.dim) * space.state_map;
    m.xi_map = rows_of(xi_rows, pd.dim) * space.effect_map;
    return m;
}

EmbeddingWitness model_to_witness(const OntologicalModel& m) {
    // Ontic state λ <-> simplex vertex b_λ; coordinates along b_λ are the
    // model's values, so the matrices carry over unchanged.
    return EmbeddingWitness{m.d, m.mu_map, m.xi_map};
}

OntologicalModel witness_to_model(const EmbeddingWitness& w) { return OntologicalModel{w.d, w.iota, w.kappa}; }

PairDecomposition minimize_support(const PairDecomposition& pd) {
    if (!is_valid(pd)) throw NotIdentityDecomposition("input decomposition is not a valid identity decomposition");
    const std::size_t nv = pd.v_list.size(), nh = pd.h_list.size();
    Matrix alpha = pd.alpha;
    std::vector<bool> allowed(nv * nh, false);
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nh; ++j) allowed[i * nh + j] = sgn(alpha(i, j)) > 0;

    // Try to drop columns, smallest weight first, ties by column index.
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < allowed.size(); ++c)
        if (allowed[c]) order.push_back(c);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return alpha(a / nh, a % nh) < alpha(b / nh, b % nh);
    });
    for (std::size_t col : order) {
        if (!allowed[col]) continue;
        allowed[col] = false;
        auto prob = pair_lp(pd.v_list, pd.h_list, pd.dim, &allowed);
        auto res = lp::solve(prob);
        if (res.status != lp::Status::Optimal) {
            allowed[col] = true;
            continue;
        }
        alpha = alpha_from(res.x, nv, nh);
        for (std::size_t c = 0; c < allowed.size(); ++c) allowed[c] = allowed[c] && sgn(res.x[c]) > 0;
    }

    // Drop candidates that carry no weight.
    PairDecomposition out;
    out.dim = pd.dim;
    std::vector<std::size_t> keep_v, keep_h;
    for (std::size_t i = 0; i < nv; ++i) {
        bool used = false;
        for (std::size_t j = 0; j < nh; ++j) used = used || sgn(alpha(i, j)) > 0;
        if (used) keep_v.push_back(i);
    }
    for (std::size_t j = 0; j < nh; ++j) {
        bool used = false;
        for (std::size_t i = 0; i < nv; ++i) used = used || sgn(alpha(i, j)) > 0;
        if (used) keep_h.push_back(j);
    }
    for (auto i : keep_v) out.v_list.push_back(pd.v_list[i]);
    for (auto j : keep_h) out.h_list.push_back(pd.h_list[j]);
    out.alpha = Matrix(keep_v.size(), keep_h.size());
    for (std::size_t a = 0; a < keep_v.size(); ++a)
        for (std::size_t b = 0; b < keep_h.size(); ++b) out.alpha(a, b) = alpha(keep_v[a], keep_h[b]);
    return out;
}

Verdict decide(const Gpt& g, const DecideOptions& opts) {
    Verdict v;
    EmbeddingLp elp = build_embedding_lp(g);
    v.accessible_dim = elp.space.dim;
    v.lp_rows = elp.problem.a.size();
    if (elp.space.reduced)
        v.warnings.push_back("states/effects do not span the ambient space; decision applies to the " +
                             std::to_string(elp.space.dim) + "-dimensional accessible subspace");
    auto res = lp::solve(elp.problem);
    if (res.status == lp::Status::Optimal) {
        v.embeddable = true;
        PairDecomposition pd;
        pd.dim = elp.space.dim;
        pd.v_list = elp.v_list;
        pd.h_list = elp.h_list;
        pd.alpha = alpha_from(res.x, pd.v_list.size(), pd.h_list.size());
        v.lp_support = pd.support();
        if (opts.minimize) pd = minimize_support(pd);
        // Keep only used candidates even when not minimizing.
        v.model = model_from_decomposition(pd, elp.space);
        v.witness = model_to_witness(*v.model);
        v.decomposition = std::move(pd);
    } else {
        v.embeddable = false;
        v.farkas = res.farkas;
    }
    v.lower_bound = min_d_lower_bound(g);
    return v;
}

bool verify_certificate(const Gpt& g, const std::vector<Rational>& farkas) {
    EmbeddingLp elp = build_embedding_lp(g);
    return lp::verify_farkas(elp.problem, farkas);
}

bool verify_witness(const Gpt& g, const EmbeddingWitness& w, const Rational& tol) {
    if (w.iota.cols() != g.dim || w.kappa.cols() != g.dim || w.iota.rows() != w.d || w.kappa.rows() != w.d)
        throw DimensionMismatch("witness maps must be d x dim");
    std::vector<Vector> is, ke;
    for (const auto& s : g.states.vertices) {
        Vector x = w.iota.apply(s);
        Rational total = 0;
        for (const auto& c : x) {
            if (c < -tol) return false;
            total += c;
        }
        if (abs_q(total - 1) > tol) return false;
        is.push_back(std::move(x));
    }
    for (const auto& e : g.effects.vertices) {
        Vector y = w.kappa.apply(e);
        for (const auto& c : y)
            if (c < -tol || c > 1 + tol) return false;
        ke.push_back(std::move(y));
    }
    for (const auto& c : w.kappa.apply(g.unit))
        if (abs_q(c - 1) > tol) return false;
    for (std::size_t i = 0; i < ke.size(); ++i)
        for (std::size_t j = 0; j < is.size(); ++j)
            if (abs_q(dot(ke[i], is[j]) - dot(g.effects.vertices[i], g.states.vertices[j])) > tol) return false;
    return true;
}

ModelCheck check_model(const Gpt& g, const OntologicalModel& m, const Rational& tol) {
    if (m.mu_map.cols() != g.dim || m.xi_map.cols() != g.dim || m.mu_map.rows() != m.d || m.xi_map.rows() != m.d)
        throw DimensionMismatch("model maps must be d x dim");
    ModelCheck mc;
    std::vector<Vector> mus, xis;
    for (const auto& s : g.states.vertices) {
        Vector mu = m.mu_map.apply(s);
        Rational total = 0;
        for (const auto& c : mu) {
            if (c < -tol) mc.normalized = false;
            total += c;
        }
        if (abs_q(total - 1) > tol) mc.normalized = false;
        mus.push_back(std::move(mu));
    }
    for (const auto& e : g.effects.vertices) {
        Vector xi = m.xi_map.apply(e);
        for (const auto& c : xi)
            if (c < -tol || c > 1 + tol) mc.responses = false;
        xis.push_back(std::move(xi));
    }
    for (const auto& c : m.xi_map.apply(g.unit))
        if (abs_q(c - 1) > tol) mc.unit = false;
    for (std::size_t i = 0; i < xis.size(); ++i)
        for (std::size_t j = 0; j < mus.size(); ++j)
            if (abs_q(dot(xis[i], mus[j]) - dot(g.effects.vertices[i], g.states.vertices[j])) > tol)
                mc.reproduces = false;
    return mc;
}

std::size_t sperner_min_d(std::size_t k) {
    if (k == 0) return 0;
    for (std::size_t d = 1;; ++d) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), d, d / 2);
        if (c >= static_cast<unsigned long>(k)) return d;
    }
}

LowerBound lower_bound_details(const Gpt& g) {
    using Bits = boost::dynamic_bitset<>;
    const auto& states = g.states.vertices;
    const auto& effects = g.effects.vertices;
    LowerBound lb;
    lb.accessible_dim = accessible_space(g).dim;

    // Zero pattern of each state vertex; identical patterns form one class.
    std::vector<Bits> classes;
    std::vector<std::size_t> representative;
    for (std::size_t j = 0; j < states.size(); ++j) {
        Bits z(effects.size());
        for (std::size_t i = 0; i < effects.size(); ++i)
            if (sgn(dot(effects[i], states[j])) == 0) z.set(i);
        if (std::find(classes.begin(), classes.end(), z) == classes.end()) {
            classes.push_back(z);
            representative.push_back(j);
        }
    }
    // Maximum antichain under strict inclusion (Dilworth via bipartite matching).
    const std::size_t n = classes.size();
    auto below = [&](std::size_t a, std::size_t b) {
        return a != b && classes[a].is_subset_of(classes[b]) && classes[a] != classes[b];
    };
    std::vector<long> match_right(n, -1), match_left(n, -1);
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<bool> seen(n, false);
        std::function<bool(std::size_t)> augment = [&](std::size_t x) {
            for (std::size_t y = 0; y < n; ++y) {
                if (!below(x, y) || seen[y]) continue;
                seen[y] = true;
                if (match_right[y] < 0 || augment(static_cast<std::size_t>(match_right[y]))) {
                    match_right[y] = static_cast<long>(x);
                    match_left[x] = static_cast<long>(y);
                    return true;
                }
            }
            return false;
        };
        augment(a);
    }
    // König: alternating reachability from unmatched left vertices.
    std::vector<bool> reach_left(n, false), reach_right(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t a = 0; a < n; ++a)
        if (match_left[a] < 0) {
            reach_left[a] = true;
            stack.push_back(a);
        }
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        for (std::size_t y = 0; y < n; ++y) {
            if (!below(x, y) || reach_right[y]) continue;
            reach_right[y] = true;
            if (match_right[y] >= 0 && !reach_left[static_cast<std::size_t>(match_right[y])]) {
                reach_left[static_cast<std::size_t>(match_right[y])] = true;
                stack.push_back(static_cast<std::size_t>(match_right[y]));
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        if (reach_left[a] && !reach_right[a]) lb.witnesses.push_back(states[representative[a]]);
    lb.antichain = lb.witnesses.size();
    lb.bound = std::max(sperner_min_d(lb.antichain), lb.accessible_dim);
    return lb;
}

std::size_t min_d_lower_bound(const Gpt& g) { return lower_bound_details(g).bound; }

namespace {

using DMat = std::vector<std::vector<double>>;

struct FloatSpace {
    std::size_t r = 0;
    std::vector<std::vector<double>> states;   // accessible coordinates
    std::vector<std::vector<double>> effects;  // nontrivial effects only
    std::vector<double> unit;
    std::vector<std::vector<double>> k_e;      // vertices of K_E
};

double residual_of(const DMat& x, const DMat& m, std::size_t d, std::size_t r) {
    double res = 0;
    for (std::size_t p = 0; p < r; ++p)
        for (std::size_t q = 0; q < r; ++q) {
            double s = p == q ? -1.0 : 0.0;
            for (std::size_t l = 0; l < d; ++l) s += x[l][p] * m[l][q];
            res += std::fabs(s);
        }
    return res;
}

/// One side of the alternation: find Y (d x r) minimizing |Y^T F - I|_1
/// subject to lo <= <a, y_l> <= hi and either <a_eq, y_l> = 1 for every l
/// or sum_l y_l = total.
struct Bound {
    std::vector<double> a;
    double lo = 0;
    std::optional<double> hi;
};

struct StepSpec {
    std::vector<Bound> bounds;
    std::vector<double> per_row_unit;  // <a, y_l> = 1, if nonempty
    std::vector<double> total;         // sum_l y_l = total, if nonempty
};

bool factor_step(const StepSpec& spec, std::size_t d, std::size_t r, const DMat& f, DMat& y) {
    const std::size_t ny = d * r, nres = r * r;
    std::size_t slack_per_bound = 0;
    for (const auto& b : spec.bounds) slack_per_bound += b.hi ? 2 : 1;
    const std::size_t nslack = d * slack_per_bound;
    lp::Problem<double> p;
    p.num_vars = 2 * ny + 2 * nres + nslack;
    p.max_pivots = 20000;
    p.c.assign(p.num_vars, 0.0);
    auto ycol = [&](std::size_t l, std::size_t c) { return l * r + c; };
    auto row = [&]() { return std::vector<double>(p.num_vars, 0.0); };
    auto put_y = [&](std::vector<double>& rw, std::size_t l, std::size_t c, double v) {
        rw[ycol(l, c)] += v;
        rw[ny + ycol(l, c)] -= v;
    };
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) {
            auto rw = row();
            for (std::size_t l = 0; l < d; ++l) put_y(rw, l, a, f[l][b]);
            rw[2 * ny + a * r + b] = -1;
            rw[2 * ny + nres + a * r + b] = 1;
            p.a.push_back(std::move(rw));
            p.b.push_back(a == b ? 1.0 : 0.0);
        }
    for (std::size_t k = 0; k < 2 * nres; ++k) p.c[2 * ny + k] = 1.0;
    std::size_t s = 2 * ny + 2 * nres;
    for (std::size_t l = 0; l < d; ++l)
        for (const auto& bd : spec.bounds) {
            // <a, y_l> - slack = lo ;  <a, y_l> + slack = hi
            auto lo = row();
            for (std::size_t c = 0; c < r; ++c) put_y(lo, l, c, bd.a[c]);
            lo[s++] = -1;
            p.a.push_back(std::move(lo));
            p.b.push_back(bd.lo);
            if (!bd.hi) continue;
            auto hi = row();
            for (std::size_t c = 0; c < r; ++c) put_y(hi, l, c, bd.a[c]);
            hi[s++] = 1;
            p.a.push_back(std::move(hi));
            p.b.push_back(*bd.hi);
        }
    if (!spec.per_row_unit.empty())
        for (std::size_t l = 0; l < d; ++l) {
            auto rw = row();
            for (std::size_t c = 0; c < r; ++c) put_y(rw, l, c, spec.per_row_unit[c]);
            p.a.push_back(std::move(rw));
            p.b.push_back(1.0);
        }
    if (!spec.total.empty())
        for (std::size_t c = 0; c < r; ++c) {
            auto rw = row();
            for (std::size_t l = 0; l < d; ++l) put_y(rw, l, c, 1.0);
            p.a.push_back(std::move(rw));
            p.b.push_back(spec.total[c]);
        }
    auto res = lp::solve(p);
    if (res.status != lp::Status::Optimal) return false;
    for (std::size_t l = 0; l < d; ++l)
        for (std::size_t c = 0; c < r; ++c) y[l][c] = res.x[ycol(l, c)] - res.x[ny + ycol(l, c)];
    return true;
}

double violation(const std::vector<Bound>& bounds, const DMat& y) {
    double v = 0;
    for (const auto& row : y)
        for (const auto& bd : bounds) {
            double t = 0;
            for (std::size_t c = 0; c < row.size(); ++c) t += bd.a[c] * row[c];
            v += std::max(0.0, bd.lo - t);
            if (bd.hi) v += std::max(0.0, t - *bd.hi);
        }
    return v;
}

std::optional<OntologicalModel> single_restart(const Gpt& g, const Accessible& acc, const FloatSpace& fs,
                                               const std::vector<std::size_t>& basis_states, std::size_t d,
                                               std::size_t index, const SearchOptions& opts) {
    const std::size_t r = fs.r;
    std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ULL + index);
    std::exponential_distribution<double> expo(1.0);
    // Dirichlet(1) distributions for a basis of states, extended linearly.
    Matrix targets(d, r);
    for (std::size_t k = 0; k < r; ++k) {
        std::vector<double> w(d);
        double total = 0;
        for (auto& x : w) total += (x = expo(rng));
        for (std::size_t l = 0; l < d; ++l) targets(l, k) = rationalize(w[l] / total, 1e-12);
    }
    std::vector<Vector> basis_cols;
    for (auto j : basis_states) basis_cols.push_back(acc.states[j]);
    Matrix c = Matrix::from_columns(basis_cols, r);
    auto c_inv = inverse(c);
    Matrix m0 = targets * *c_inv;
    DMat m(d, std::vector<double>(r)), x(d, std::vector<double>(r, 0.0));
    for (std::size_t l = 0; l < d; ++l)
        for (std::size_t k = 0; k < r; ++k) m[l][k] = m0(l, k).get_d();

    std::vector<Bound> xi_bounds, mu_bounds;
    for (const auto& e : fs.effects) xi_bounds.push_back(Bound{e, 0.0, 1.0});
    for (const auto& s : fs.states) mu_bounds.push_back(Bound{s, 0.0, std::nullopt});
    StepSpec xs{xi_bounds, fs.unit, {}};
    StepSpec ms{mu_bounds, {}, fs.unit};
    auto score = [&] { return residual_of(x, m, d, r) + violation(xi_bounds, x) + violation(mu_bounds, m); };
    double best = std::numeric_limits<double>::infinity();
    std::size_t stall = 0;
    // Odd restarts start from response vectors at vertices of K_E instead:
    // LP alternation rarely leaves the basin of its first partial optimum,
    // and exact models tend to put v_λ on vertices.
    bool xi_first = index % 2 == 1 && !fs.k_e.empty();
    if (xi_first) {
        std::vector<std::size_t> order(fs.k_e.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t l = 0; l < d; ++l) {
            if (l < order.size()) {
                x[l] = fs.k_e[order[l]];
                continue;
            }
            double total = 0;
            std::vector<double> w(fs.k_e.size());
            for (auto& t : w) total += (t = expo(rng));
            for (std::size_t c = 0; c < r; ++c) {
                x[l][c] = 0;
                for (std::size_t i = 0; i < w.size(); ++i) x[l][c] += w[i] / total * fs.k_e[i][c];
            }
        }
    }
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        if (!(xi_first && it == 0) && !factor_step(xs, d, r, m, x)) return std::nullopt;
        if (!factor_step(ms, d, r, x, m)) return std::nullopt;
        double res = score();
        if (res < opts.tol * 1e-2) break;
        if (res > best - 1e-9) {
            if (++stall >= 3) break;
        } else {
            stall = 0;
        }
        best = std::min(best, res);
    }
    if (score() > opts.tol) return std::nullopt;
    Matrix mu_red(d, r), xi_red(d, r);
    for (std::size_t l = 0; l < d; ++l)
        for (std::size_t k = 0; k < r; ++k) {
            mu_red(l, k) = rationalize(m[l][k], 1e-12);
            xi_red(l, k) = rationalize(x[l][k], 1e-12);
        }
    OntologicalModel model;
    model.d = d;
    model.mu_map = mu_red * acc.state_map;
    model.xi_map = xi_red * acc.effect_map;
    if (!check_model(g, model, rationalize(opts.tol, 1e-15)).ok()) return std::nullopt;
    return model;
}

} // namespace

std::optional<OntologicalModel> bilinear_search(const Gpt& g, std::size_t d, const SearchOptions& opts) {
    if (d < 1) throw InvalidDimension("bilinear_search needs d >= 1");
    Accessible acc = accessible_space(g);
    FloatSpace fs;
    fs.r = acc.dim;
    for (const auto& s : acc.states) fs.states.push_back(to_double(s));
    for (const auto& e : acc.effects)
        if (!is_zero(e) && e != acc.unit) fs.effects.push_back(to_double(e));
    fs.unit = to_double(acc.unit);
    for (const auto& v : k_e_vertices(acc)) fs.k_e.push_back(to_double(v));
    auto basis_states = independent_subset(acc.states, acc.dim);

    const unsigned jobs = std::max(1u, opts.jobs);
    for (std::size_t start = 0; start < opts.restarts; start += jobs) {
        std::size_t batch = std::min<std::size_t>(jobs, opts.restarts - start);
        std::vector<std::optional<OntologicalModel>> found(batch);
        auto run = [&](std::size_t k) {
            found[k] = single_restart(g, acc, fs, basis_states, d, start + k, opts);
        };
        if (batch == 1) {
            run(0);
        } else {
            std::vector<std::thread> threads;
            for (std::size_t k = 0; k < batch; ++k) threads.emplace_back(run, k);
            for (auto& t : threads) t.join();
        }
        for (auto& f : found)
            if (f) return f;
    }
    return std::nullopt;
}

} // namespace gptnc::embed
