#include "gptnc/quasiprob.hpp"

#include "gptnc/embed.hpp"
#include "gptnc/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace gptnc::quasiprob {

namespace {

Rational abs_q(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

Rational negative_part(const Rational& x) { return sgn(x) < 0 ? Rational(-x) : Rational(0); }

} // namespace

QuasiRep from_decomposition(const Gpt& g, const std::vector<std::pair<Vector, Vector>>& pairs) {
    if (pairs.empty()) throw NotIdentityDecomposition("no pairs given");
    Matrix frame(g.dim, g.dim);
    std::vector<Vector> mu_rows, xi_rows;
    for (const auto& [v, h] : pairs) {
        if (v.size() != g.dim || h.size() != g.dim) throw DimensionMismatch("pair vectors must have the GPT dimension");
        if (dot(g.unit, v) != 1) throw NotIdentityDecomposition("a pair has <u, v> != 1");
        for (std::size_t a = 0; a < g.dim; ++a)
            for (std::size_t b = 0; b < g.dim; ++b) frame(a, b) += v[a] * h[b];
        mu_rows.push_back(h);
        xi_rows.push_back(v);
    }
    for (const auto& s : g.states.vertices)
        if (frame.apply(s) != s) throw NotIdentityDecomposition("sum of v h^T does not fix every state");
    return QuasiRep{pairs.size(), Matrix::from_rows(mu_rows, g.dim), Matrix::from_rows(xi_rows, g.dim)};
}

bool is_positive(const Gpt& g, const QuasiRep& q, const Rational& tol) {
    for (const auto& s : g.states.vertices)
        for (const auto& x : q.mu_hat.apply(s))
            if (x < -tol) return false;
    for (const auto& e : g.effects.vertices)
        for (const auto& x : q.xi_hat.apply(e))
            if (x < -tol || x > 1 + tol) return false;
    return true;
}

Negativity negativity(const Gpt& g, const QuasiRep& q) {
    Negativity n;
    for (const auto& s : g.states.vertices) {
        Rational total = 0;
        for (const auto& x : q.mu_hat.apply(s)) total += negative_part(x);
        n.states = std::max(n.states, total);
    }
    for (const auto& e : g.effects.vertices) {
        Rational total = 0;
        for (const auto& x : q.xi_hat.apply(e)) total += negative_part(x) + negative_part(1 - x);
        n.effects = std::max(n.effects, total);
    }
    return n;
}

QuasiCheck check(const Gpt& g, const QuasiRep& q, const std::vector<std::vector<Vector>>& measurements,
                 const Rational& tol) {
    if (q.mu_hat.cols() != g.dim || q.xi_hat.cols() != g.dim || q.mu_hat.rows() != q.d || q.xi_hat.rows() != q.d)
        throw DimensionMismatch("representation maps must be d x dim");
    QuasiCheck c;
    std::vector<Vector> mus, xis;
    for (const auto& s : g.states.vertices) {
        mus.push_back(q.mu_hat.apply(s));
        Rational total = 0;
        for (const auto& x : mus.back()) total += x;
        if (abs_q(total - 1) > tol) c.normalized = false;
    }
    for (const auto& e : g.effects.vertices) xis.push_back(q.xi_hat.apply(e));
    for (std::size_t i = 0; i < xis.size(); ++i)
        for (std::size_t j = 0; j < mus.size(); ++j)
            if (abs_q(dot(xis[i], mus[j]) - dot(g.effects.vertices[i], g.states.vertices[j])) > tol)
                c.reproduces = false;

    std::vector<std::vector<Vector>> all = measurements;
    all.push_back({g.unit});
    bool closed = true;
    for (const auto& e : g.effects.vertices) closed = closed && geometry::contains(g.effects, g.unit - e);
    if (closed)
        for (const auto& e : g.effects.vertices) all.push_back({e, g.unit - e});
    for (const auto& chi : all) {
        Vector sum(g.dim), response(q.d);
        for (const auto& e : chi) {
            if (e.size() != g.dim) throw DimensionMismatch("measurement effect has the wrong dimension");
            sum = sum + e;
            response = response + q.xi_hat.apply(e);
        }
        if (sum != g.unit) throw BadParams("a declared measurement does not sum to the unit effect");
        for (const auto& x : response)
            if (abs_q(x - 1) > tol) c.measurements = false;
    }
    return c;
}

QuasiRep from_model(const OntologicalModel& m) { return QuasiRep{m.d, m.mu_map, m.xi_map}; }

OntologicalModel to_model(const Gpt& g, const QuasiRep& q) {
    if (!is_positive(g, q)) throw NotPositive("representation takes values outside [0,1] on some vertex");
    return OntologicalModel{q.d, q.mu_hat, q.xi_hat};
}

std::vector<std::pair<Vector, Vector>> square_frame() {
    std::vector<std::pair<Vector, Vector>> out;
    for (int a : {1, -1})
        for (int b : {1, -1}) {
            Vector v{Rational(1), Rational(a), Rational(b)};
            out.emplace_back(v, Rational(1, 4) * v);
        }
    return out;
}

NegativitySearch minimize_negativity(const Gpt& g, std::size_t d, std::uint64_t seed, std::size_t iterations) {
    using Mat = Eigen::MatrixXd;
    using Vec = Eigen::VectorXd;
    embed::Accessible acc = embed::accessible_space(g);
    const std::size_t r = acc.dim;
    if (d < r) throw InvalidDimension("minimize_negativity needs d >= the accessible dimension");
    auto to_eigen = [&](const std::vector<Vector>& pts) {
        Mat m(r, pts.size());
        for (std::size_t j = 0; j < pts.size(); ++j)
            for (std::size_t i = 0; i < r; ++i) m(i, j) = pts[j][i].get_d();
        return m;
    };
    const Mat S = to_eigen(acc.states), E = to_eigen(acc.effects);
    Vec u(r);
    for (std::size_t i = 0; i < r; ++i) u(i) = acc.unit[i].get_d();

    auto attempt = [&](std::uint64_t start) {
        std::mt19937_64 rng(start);
        std::normal_distribution<double> gauss(0.0, 1.0);
        // Rows of X are v_λ, rows of M are h_λ; the constraint is X^T M = I.
        Mat X(d, r);
        for (std::size_t l = 0; l < d; ++l) {
            for (std::size_t c = 0; c < r; ++c) X(l, c) = gauss(rng);
            X.row(l) += ((1.0 - X.row(l).dot(u)) / u.squaredNorm()) * u.transpose();
        }
        // Joint descent on w |X^T M - I|^2 plus squared sign violations, keeping
        // X u = 1 and sum_l m_l = u exact after every step.
        Mat M = X * (X.transpose() * X).ldlt().solve(Mat::Identity(r, r));
        auto fix_rows = [&] {
            for (std::size_t l = 0; l < d; ++l) X.row(l) += ((1.0 - X.row(l).dot(u)) / u.squaredNorm()) * u.transpose();
            Vec excess = M.colwise().sum().transpose() - u;
            M.rowwise() -= (excess / static_cast<double>(d)).transpose();
        };
        auto float_negativity = [&](const Mat& Xc, const Mat& Mc) {
            Mat mu = Mc * S, xi = Xc * E;
            double ns = 0, ne = 0;
            for (Eigen::Index j = 0; j < mu.cols(); ++j) ns = std::max(ns, (-mu.col(j)).cwiseMax(0.0).sum());
            for (Eigen::Index j = 0; j < xi.cols(); ++j)
                ne = std::max(ne, (-xi.col(j)).cwiseMax(0.0).sum() + (xi.col(j).array() - 1.0).cwiseMax(0.0).sum());
            return ns + ne;
        };

        const double scale = std::max(1.0, S.colwise().squaredNorm().maxCoeff() + E.colwise().squaredNorm().maxCoeff());
        const double step = 0.1 / scale;
        const double weight = 10.0;
        Mat best_x = X, best_m = M;
        double best = float_negativity(X, M);
        std::size_t it = 0;
        for (; it < iterations && best > 1e-12; ++it) {
            Mat res = X.transpose() * M - Mat::Identity(r, r);
            Mat mu = M * S, xi = X * E;
            Mat over = (xi.array() - 1.0).cwiseMax(0.0).matrix();
            Mat grad_x = weight * M * res.transpose() + (xi.cwiseMin(0.0) + over) * E.transpose();
            Mat grad_m = weight * X * res + mu.cwiseMin(0.0) * S.transpose();
            // Clip the step so an ill-conditioned start cannot blow up.
            const double norm = std::sqrt(grad_x.squaredNorm() + grad_m.squaredNorm());
            const double eta = norm > 10.0 ? step * 10.0 / norm : step;
            X -= eta * grad_x;
            M -= eta * grad_m;
            fix_rows();
            if (!X.allFinite() || !M.allFinite()) break;
            if (it % 10 == 0) {
                // Score the nearest exact representation, not the penalized iterate.
                Mat corrected = M + X * (X.transpose() * X).ldlt().solve(Mat::Identity(r, r) - X.transpose() * M);
                double n = float_negativity(X, corrected);
                if (n < best) {
                    best = n;
                    best_x = X;
                    best_m = corrected;
                }
            }
        }

        // Exact correction: X u = 1 and X^T M = I in rationals.
        Matrix xq(d, r), mq(d, r);
        for (std::size_t l = 0; l < d; ++l)
            for (std::size_t c = 0; c < r; ++c) {
                xq(l, c) = rationalize(best_x(l, c), 1e-7);
                mq(l, c) = rationalize(best_m(l, c), 1e-7);
            }
        Rational uu = dot(acc.unit, acc.unit);
        for (std::size_t l = 0; l < d; ++l) {
            Rational shift = (1 - dot(xq.row(l), acc.unit)) / uu;
            for (std::size_t c = 0; c < r; ++c) xq(l, c) += shift * acc.unit[c];
        }
        Matrix xt = xq.transpose();
        auto gram_inv = inverse(xt * xq);
        if (!gram_inv) throw SingularMap("heuristic produced a rank-deficient response frame");
        mq = mq + xq * (*gram_inv * (Matrix::identity(r) - xt * mq));

        NegativitySearch out;
        out.iterations = it;
        out.rep = QuasiRep{d, mq * acc.state_map, xq * acc.effect_map};
        out.negativity = negativity(g, out.rep);
        return out;
    };

    // Independent starts; the first exactly positive result wins.
    NegativitySearch best_run;
    std::size_t total = 0;
    for (std::uint64_t k = 0; k < 8; ++k) {
        NegativitySearch run = attempt(seed * 0x9E3779B97F4A7C15ULL + k);
        total += run.iterations;
        if (k == 0 || run.negativity.total() < best_run.negativity.total()) best_run = std::move(run);
        if (sgn(best_run.negativity.total()) == 0) break;
    }
    best_run.iterations = total;
    return best_run;
}

} // namespace gptnc::quasiprob
