#pragma once

// Dense two-phase tableau simplex with Bland's rule, generic over the scalar.
// Solves   minimize c.x  subject to  A x = b,  x >= 0.
// Instantiated with Rational (exact verdicts and certificates) and double
// (heuristics that only need a fast, approximate answer).

#include "gptnc/rational.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace gptnc::lp {

template <class T>
struct Traits;

template <>
struct Traits<Rational> {
    static int sign(const Rational& x) { return sgn(x); }
};

template <>
struct Traits<double> {
    static constexpr double eps = 1e-9;
    static int sign(double x) { return x > eps ? 1 : (x < -eps ? -1 : 0); }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

template <class T>
struct Problem {
    std::size_t num_vars = 0;
    std::vector<std::vector<T>> a;  // rows of A, each num_vars long
    std::vector<T> b;
    std::vector<T> c;               // empty means pure feasibility
    std::size_t max_pivots = 0;     // 0 = unlimited
};

template <class T>
struct Result {
    Status status = Status::Infeasible;
    std::vector<T> x;
    T objective{};
    /// On infeasibility: y with y.A_j >= 0 for every column j and y.b < 0.
    std::vector<T> farkas;
    std::size_t pivots = 0;
};

template <class T>
class Tableau {
public:
    Tableau(const Problem<T>& p) : m_(p.a.size()), n_(p.num_vars), max_pivots_(p.max_pivots) {
        width_ = n_ + m_ + 1;
        t_.assign((m_ + 1) * width_, T(0));
        flip_.assign(m_, false);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            flip_[i] = Traits<T>::sign(p.b[i]) < 0;
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = flip_[i] ? T(-p.a[i][j]) : p.a[i][j];
            at(i, n_ + i) = T(1);
            at(i, rhs()) = flip_[i] ? T(-p.b[i]) : p.b[i];
            basis_[i] = n_ + i;
        }
    }

    Result<T> solve(const std::vector<T>& cost) {
        Result<T> res;
        // Phase 1: minimize the sum of artificials.
        for (std::size_t j = 0; j < width_; ++j) obj(j) = T(0);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) obj(j) -= at(i, j);
            obj(rhs()) -= at(i, rhs());
        }
        allowed_ = n_ + m_;
        if (!run(res.pivots) && limited_) {
            res.status = Status::IterationLimit;
            return res;
        }
        T infeas = -obj(rhs());
        if (Traits<T>::sign(infeas) > 0) {
            res.status = Status::Infeasible;
            // Reduced cost of artificial i is 1 - y_i (phase-1 dual y).
            res.farkas.resize(m_);
            for (std::size_t i = 0; i < m_; ++i) {
                T y = T(1) - obj(n_ + i);
                res.farkas[i] = flip_[i] ? y : T(-y);
            }
            return res;
        }
        drive_out_artificials(res.pivots);

        // Phase 2 on the original columns only.
        allowed_ = n_;
        for (std::size_t j = 0; j < width_; ++j) obj(j) = T(0);
        if (!cost.empty()) {
            for (std::size_t j = 0; j < n_; ++j) obj(j) = cost[j];
            for (std::size_t i = 0; i < m_; ++i) {
                if (dead_[i]) continue;
                std::size_t bj = basis_[i];
                if (bj >= n_ || Traits<T>::sign(cost[bj]) == 0) continue;
                T cb = cost[bj];
                for (std::size_t j = 0; j < width_; ++j)
                    if (Traits<T>::sign(at(i, j)) != 0) obj(j) -= cb * at(i, j);
            }
            if (!run(res.pivots)) {
                res.status = limited_ ? Status::IterationLimit : Status::Unbounded;
                return res;
            }
        }
        res.status = Status::Optimal;
        res.x.assign(n_, T(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (!dead_[i] && basis_[i] < n_) res.x[basis_[i]] = at(i, rhs());
        res.objective = T(0);
        if (!cost.empty())
            for (std::size_t j = 0; j < n_; ++j) res.objective += cost[j] * res.x[j];
        return res;
    }

private:
    T& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
    T& obj(std::size_t j) { return t_[m_ * width_ + j]; }
    std::size_t rhs() const { return width_ - 1; }

    void pivot(std::size_t r, std::size_t c) {
        T inv = T(1) / at(r, c);
        for (std::size_t j = 0; j < width_; ++j)
            if (Traits<T>::sign(at(r, j)) != 0) at(r, j) *= inv;
        at(r, c) = T(1);
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            T f = t_[i * width_ + c];
            if (Traits<T>::sign(f) == 0) {
                t_[i * width_ + c] = T(0);
                continue;
            }
            for (std::size_t j = 0; j < width_; ++j)
                if (Traits<T>::sign(at(r, j)) != 0) t_[i * width_ + j] -= f * at(r, j);
            t_[i * width_ + c] = T(0);
        }
        basis_[r] = c;
    }

    /// Bland's rule iterations; false when unbounded.
    bool run(std::size_t& pivots) {
        if (dead_.size() != m_) dead_.assign(m_, false);
        for (;;) {
            std::size_t enter = allowed_;
            for (std::size_t j = 0; j < allowed_; ++j)
                if (Traits<T>::sign(obj(j)) < 0) {
                    enter = j;
                    break;
                }
            if (enter == allowed_) return true;
            std::size_t leave = m_;
            T best{};
            for (std::size_t i = 0; i < m_; ++i) {
                if (dead_[i] || Traits<T>::sign(at(i, enter)) <= 0) continue;
                T ratio = at(i, rhs()) / at(i, enter);
                if (leave == m_) {
                    leave = i;
                    best = ratio;
                    continue;
                }
                int cmp = Traits<T>::sign(T(ratio - best));
                if (cmp < 0 || (cmp == 0 && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_) return false;
            if (max_pivots_ != 0 && pivots >= max_pivots_) {
                limited_ = true;
                return false;
            }
            pivot(leave, enter);
            ++pivots;
        }
    }

    void drive_out_artificials(std::size_t& pivots) {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t c = n_;
            for (std::size_t j = 0; j < n_; ++j)
                if (Traits<T>::sign(at(i, j)) != 0) {
                    c = j;
                    break;
                }
            if (c == n_) {
                dead_[i] = true;  // redundant equality
                continue;
            }
            pivot(i, c);
            ++pivots;
        }
    }

    std::size_t m_, n_, max_pivots_, width_ = 0, allowed_ = 0;
    bool limited_ = false;
    std::vector<T> t_;
    std::vector<bool> flip_;
    std::vector<bool> dead_;
    std::vector<std::size_t> basis_;
};

template <class T>
Result<T> solve(const Problem<T>& p) {
    for (const auto& row : p.a)
        if (row.size() != p.num_vars) throw std::invalid_argument("lp::solve: ragged constraint row");
    if (p.b.size() != p.a.size()) throw std::invalid_argument("lp::solve: rhs size");
    if (!p.c.empty() && p.c.size() != p.num_vars) throw std::invalid_argument("lp::solve: cost size");
    Tableau<T> tab(p);
    return tab.solve(p.c);
}

/// Checks a Farkas certificate exactly: y.A_j >= 0 for all j and y.b < 0.
inline bool verify_farkas(const Problem<Rational>& p, const std::vector<Rational>& y) {
    if (y.size() != p.a.size()) return false;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        Rational s = 0;
        for (std::size_t i = 0; i < p.a.size(); ++i)
            if (sgn(y[i]) != 0 && sgn(p.a[i][j]) != 0) s += y[i] * p.a[i][j];
        if (sgn(s) < 0) return false;
    }
    Rational yb = 0;
    for (std::size_t i = 0; i < p.b.size(); ++i) yb += y[i] * p.b[i];
    return sgn(yb) < 0;
}

} // namespace gptnc::lp
