// Copyright 2026 The nlact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlact/sdp.h"

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace nlact {

// ---------------------------------------------------------------------------
// Modelling layer
// ---------------------------------------------------------------------------

LinearForm &LinearForm::add(BlockId b, std::size_t row, std::size_t col, double value) {
    if (value != 0) {
        block_terms_.push_back({b.index, row, col, value});
    }
    return *this;
}

LinearForm &LinearForm::add(ScalarId s, double value) {
    if (value != 0) {
        scalar_terms_.push_back({s.index, value});
    }
    return *this;
}

LinearForm &LinearForm::add_re(HermBlock h, std::size_t row, std::size_t col, double value) {
    add(h.block, row, col, value / 2);
    add(h.block, row + h.n, col + h.n, value / 2);
    return *this;
}

LinearForm &LinearForm::add_im(HermBlock h, std::size_t row, std::size_t col, double value) {
    if (row == col) {
        return *this;
    }
    add(h.block, row + h.n, col, value / 2);
    add(h.block, row, col + h.n, -value / 2);
    return *this;
}

ComplexLinearForm &ComplexLinearForm::add(HermBlock h, std::size_t row, std::size_t col, cplx coeff) {
    // (a + ib)(Re H + i Im H) = (a Re H − b Im H) + i(b Re H + a Im H).
    re.add_re(h, row, col, coeff.real());
    re.add_im(h, row, col, -coeff.imag());
    im.add_re(h, row, col, coeff.imag());
    im.add_im(h, row, col, coeff.real());
    return *this;
}

ComplexLinearForm &ComplexLinearForm::add(ScalarId s, cplx coeff) {
    re.add(s, coeff.real());
    im.add(s, coeff.imag());
    return *this;
}

BlockId SdpProblem::add_block(std::string name, std::size_t size) {
    if (size == 0) {
        throw std::invalid_argument("SdpProblem: block '" + name + "' has zero size");
    }
    blocks_.push_back({std::move(name), size});
    return {blocks_.size() - 1};
}

HermBlock SdpProblem::add_hermitian_block(std::string name, std::size_t n) {
    return {add_block(std::move(name), 2 * n), n};
}

ScalarId SdpProblem::add_scalar(std::string name, double lower, double upper) {
    if (std::isnan(lower) || std::isnan(upper) || lower > upper || lower == INFINITY || upper == -INFINITY) {
        throw std::invalid_argument("SdpProblem: scalar '" + name + "' has invalid bounds");
    }
    scalars_.push_back({std::move(name), lower, upper});
    return {scalars_.size() - 1};
}

void SdpProblem::check(const LinearForm &f) const {
    for (const auto &t : f.block_terms()) {
        if (t.block >= blocks_.size()) {
            throw std::invalid_argument("SdpProblem: unknown block in linear form");
        }
        if (t.row >= blocks_[t.block].size || t.col >= blocks_[t.block].size) {
            throw std::invalid_argument("SdpProblem: entry outside block '" + blocks_[t.block].name + "'");
        }
        if (!std::isfinite(t.value)) {
            throw std::invalid_argument("SdpProblem: non-finite coefficient");
        }
    }
    for (const auto &t : f.scalar_terms()) {
        if (t.scalar >= scalars_.size()) {
            throw std::invalid_argument("SdpProblem: unknown scalar in linear form");
        }
        if (!std::isfinite(t.value)) {
            throw std::invalid_argument("SdpProblem: non-finite coefficient");
        }
    }
}

void SdpProblem::set_objective(LinearForm f) {
    check(f);
    objective_ = std::move(f);
}

void SdpProblem::add_constraint(LinearForm f, double rhs) {
    check(f);
    if (!std::isfinite(rhs)) {
        throw std::invalid_argument("SdpProblem: non-finite right-hand side");
    }
    constraints_.push_back({std::move(f), rhs});
}

void SdpProblem::add_constraint(const ComplexLinearForm &f, cplx rhs, bool real_only) {
    add_constraint(f.re, rhs.real());
    if (!real_only) {
        add_constraint(f.im, rhs.imag());
    }
}

double SdpProblem::evaluate(const LinearForm &f, const std::vector<RMatrix> &blocks,
                            const std::vector<double> &scalars) const {
    double v = 0;
    for (const auto &t : f.block_terms()) {
        const RMatrix &x = blocks.at(t.block);
        // Symmetric variable: read the average so asymmetric round-off in the
        // stored value cannot bias the result.
        v += t.value * 0.5 * (x(t.row, t.col) + x(t.col, t.row));
    }
    for (const auto &t : f.scalar_terms()) {
        v += t.value * scalars.at(t.scalar);
    }
    return v;
}

CMatrix SdpSolution::hermitian(HermBlock h) const {
    const RMatrix &x = block(h.block);
    CMatrix out(h.n, h.n);
    for (std::size_t r = 0; r < h.n; r++) {
        for (std::size_t c = 0; c < h.n; c++) {
            double re = 0.5 * (x(r, c) + x(r + h.n, c + h.n));
            double im = 0.5 * (x(r + h.n, c) - x(r, c + h.n));
            out(r, c) = cplx(re, im);
        }
    }
    return cplx(0.5) * (out + out.adjoint());
}

const char *to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::Optimal:
            return "Optimal";
        case SdpStatus::PrimalInfeasible:
            return "PrimalInfeasible";
        case SdpStatus::DualInfeasible:
            return "DualInfeasible";
        case SdpStatus::MaxIterations:
            return "MaxIterations";
        case SdpStatus::NumericalFailure:
            return "NumericalFailure";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Standard form
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kInternalRow = static_cast<std::size_t>(-1);

struct Part {
    std::size_t block;
    RMatrix m;  // symmetric
};

struct Row {
    std::vector<Part> parts;
    double rhs;
    std::size_t user_index;
};

// How a user scalar is expressed through nonnegative 1×1 cone blocks.
struct ScalarMap {
    enum class Kind { Lower, Upper, Free } kind;
    double bound;             // lower bound (Lower) or upper bound (Upper)
    std::size_t block;        // x = bound ± s, or the positive part when free
    std::size_t neg_block;    // negative part when free
};

struct StandardForm {
    std::vector<std::size_t> sizes;
    std::vector<RMatrix> c;
    std::vector<Row> rows;
    std::vector<ScalarMap> scalars;
    std::size_t user_blocks = 0;
    // User objective = −⟨C, X⟩ + offset.
    double offset = 0;
};

double inner(const RMatrix &a, const RMatrix &b) {
    double s = 0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t k = 0; k < da.size(); k++) {
        s += da[k] * db[k];
    }
    return s;
}

RMatrix symmetrize(const RMatrix &m) {
    return 0.5 * (m + m.transpose());
}

class RowBuilder {
   public:
    explicit RowBuilder(const StandardForm &sf) : sf_(sf) {
    }

    void add_entry(std::size_t block, std::size_t r, std::size_t c, double v) {
        auto it = parts_.find(block);
        if (it == parts_.end()) {
            it = parts_.emplace(block, RMatrix(sf_.sizes[block], sf_.sizes[block])).first;
        }
        if (r == c) {
            it->second(r, r) += v;
        } else {
            it->second(r, c) += v / 2;
            it->second(c, r) += v / 2;
        }
    }

    // Adds coefficient g on user scalar j; returns the constant contribution
    // g·bound that must be moved to the other side.
    double add_scalar(std::size_t j, double g) {
        const ScalarMap &sm = sf_.scalars[j];
        switch (sm.kind) {
            case ScalarMap::Kind::Lower:
                add_entry(sm.block, 0, 0, g);
                return g * sm.bound;
            case ScalarMap::Kind::Upper:
                add_entry(sm.block, 0, 0, -g);
                return g * sm.bound;
            case ScalarMap::Kind::Free:
                add_entry(sm.block, 0, 0, g);
                add_entry(sm.neg_block, 0, 0, -g);
                return 0;
        }
        return 0;
    }

    double add_form(const LinearForm &f) {
        for (const auto &t : f.block_terms()) {
            add_entry(t.block, t.row, t.col, t.value);
        }
        double constant = 0;
        for (const auto &t : f.scalar_terms()) {
            constant += add_scalar(t.scalar, t.value);
        }
        return constant;
    }

    std::vector<Part> take() {
        std::vector<Part> out;
        for (auto &[b, m] : parts_) {
            if (m.max_abs() > 0) {
                out.push_back({b, std::move(m)});
            }
        }
        parts_.clear();
        return out;
    }

   private:
    const StandardForm &sf_;
    std::map<std::size_t, RMatrix> parts_;
};

StandardForm to_standard_form(const SdpProblem &p) {
    StandardForm sf;
    for (const auto &b : p.blocks()) {
        sf.sizes.push_back(b.size);
    }
    sf.user_blocks = sf.sizes.size();
    std::vector<std::pair<std::size_t, double>> range_rows;  // (scalar, ub − lb)
    for (std::size_t j = 0; j < p.scalars().size(); j++) {
        const auto &s = p.scalars()[j];
        ScalarMap sm{};
        bool has_lower = std::isfinite(s.lower);
        bool has_upper = std::isfinite(s.upper);
        sm.block = sf.sizes.size();
        sf.sizes.push_back(1);
        if (has_lower) {
            sm.kind = ScalarMap::Kind::Lower;
            sm.bound = s.lower;
            if (has_upper) {
                range_rows.emplace_back(j, s.upper - s.lower);
            }
        } else if (has_upper) {
            sm.kind = ScalarMap::Kind::Upper;
            sm.bound = s.upper;
        } else {
            sm.kind = ScalarMap::Kind::Free;
            sm.bound = 0;
            sm.neg_block = sf.sizes.size();
            sf.sizes.push_back(1);
        }
        sf.scalars.push_back(sm);
    }
    for (auto n : sf.sizes) {
        sf.c.emplace_back(n, n);
    }

    {
        RowBuilder rb(sf);
        sf.offset = rb.add_form(p.objective());
        for (auto &part : rb.take()) {
            sf.c[part.block] = -1.0 * part.m;
        }
    }
    for (std::size_t i = 0; i < p.constraints().size(); i++) {
        RowBuilder rb(sf);
        double constant = rb.add_form(p.constraints()[i].form);
        sf.rows.push_back({rb.take(), p.constraints()[i].rhs - constant, i});
    }
    for (auto [j, width] : range_rows) {
        // s + u = ub − lb with a fresh slack block u ≥ 0.
        std::size_t slack = sf.sizes.size();
        sf.sizes.push_back(1);
        sf.c.emplace_back(1, 1);
        RMatrix one(1, 1);
        one(0, 0) = 1;
        sf.rows.push_back({{{sf.scalars[j].block, one}, {slack, one}}, width, kInternalRow});
    }
    return sf;
}

struct Presolved {
    std::vector<std::size_t> kept;  // indices into sf.rows
    std::size_t dropped = 0;
    bool inconsistent = false;
    std::string message;
};

// Removes linearly dependent rows by modified Gram–Schmidt (with one
// reorthogonalization pass) on the rows flattened into the full variable
// space. A dependent row whose right-hand side disagrees with the same
// combination of earlier rows makes the system inconsistent.
Presolved presolve(const StandardForm &sf) {
    Presolved out;
    std::vector<std::size_t> offset(sf.sizes.size() + 1, 0);
    for (std::size_t b = 0; b < sf.sizes.size(); b++) {
        offset[b + 1] = offset[b] + sf.sizes[b] * sf.sizes[b];
    }
    const std::size_t dim = offset.back();
    std::vector<std::vector<double>> basis;  // orthonormal rows
    std::vector<double> basis_rhs;           // rhs carried through the same operations
    for (std::size_t i = 0; i < sf.rows.size(); i++) {
        const Row &row = sf.rows[i];
        std::vector<double> v(dim, 0.0);
        for (const auto &p : row.parts) {
            auto d = p.m.data();
            std::copy(d.begin(), d.end(), v.begin() + static_cast<std::ptrdiff_t>(offset[p.block]));
        }
        double norm0 = 0;
        for (double x : v) {
            norm0 += x * x;
        }
        norm0 = std::sqrt(norm0);
        double rhs = row.rhs;
        double rhs_scale = std::abs(row.rhs);
        if (norm0 == 0) {
            if (std::abs(rhs) > 1e-12) {
                out.inconsistent = true;
                out.message = "constraint " + std::to_string(i) + " reads 0 = " + std::to_string(row.rhs);
                return out;
            }
            out.dropped++;
            continue;
        }
        for (int pass = 0; pass < 2; pass++) {
            for (std::size_t k = 0; k < basis.size(); k++) {
                double proj = 0;
                for (std::size_t e = 0; e < dim; e++) {
                    proj += basis[k][e] * v[e];
                }
                if (proj == 0) {
                    continue;
                }
                for (std::size_t e = 0; e < dim; e++) {
                    v[e] -= proj * basis[k][e];
                }
                rhs -= proj * basis_rhs[k];
                rhs_scale += std::abs(proj * basis_rhs[k]);
            }
        }
        double norm = 0;
        for (double x : v) {
            norm += x * x;
        }
        norm = std::sqrt(norm);
        if (norm > 1e-9 * norm0) {
            for (double &x : v) {
                x /= norm;
            }
            basis.push_back(std::move(v));
            basis_rhs.push_back(rhs / norm);
            out.kept.push_back(i);
            continue;
        }
        if (std::abs(rhs) > 1e-8 * (1 + rhs_scale)) {
            out.inconsistent = true;
            out.message = "constraint " + std::to_string(i) + " contradicts a combination of earlier constraints";
            return out;
        }
        out.dropped++;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Interior-point method
// ---------------------------------------------------------------------------

using Blocks = std::vector<RMatrix>;

struct Scaling {
    RMatrix g;     // X = G·D·Gᵀ, S = G⁻ᵀ·D·G⁻¹
    RMatrix ginv;
    RMatrix w;     // G·Gᵀ
    std::vector<double> d;
};

class InteriorPoint {
   public:
    InteriorPoint(const StandardForm &sf, std::vector<const Row *> rows, const SdpOptions &opts)
        : sf_(sf), rows_(std::move(rows)), opts_(opts), m_(rows_.size()) {
        by_block_.resize(sf_.sizes.size());
        for (std::size_t i = 0; i < m_; i++) {
            for (const auto &p : rows_[i]->parts) {
                by_block_[p.block].push_back({i, &p.m});
            }
        }
        for (auto n : sf_.sizes) {
            n_total_ += n;
        }
        b_.resize(m_);
        for (std::size_t i = 0; i < m_; i++) {
            b_[i] = rows_[i]->rhs;
        }
        // Gram matrix A·Aᵀ of the (independent) constraint rows. Unlike the
        // Schur complement it does not degrade as the iterates approach the
        // boundary of the cone.
        RMatrix gram(m_, m_);
        for (const auto &list : by_block_) {
            for (std::size_t jj = 0; jj < list.size(); jj++) {
                for (std::size_t ii = 0; ii <= jj; ii++) {
                    double v = inner(*list[ii].second, *list[jj].second);
                    std::size_t i = list[ii].first;
                    std::size_t j = list[jj].first;
                    gram(i, j) += v;
                    if (i != j) {
                        gram(j, i) += v;
                    }
                }
            }
        }
        gram_chol_ = cholesky(gram);
    }

    SdpStatus run(Blocks &x, std::vector<double> &y, Blocks &s, SdpSolution &sol);

   private:
    std::vector<double> apply_a(const Blocks &x) const {
        std::vector<double> r(m_);
        for (std::size_t b = 0; b < by_block_.size(); b++) {
            for (const auto &[i, a] : by_block_[b]) {
                r[i] += inner(*a, x[b]);
            }
        }
        return r;
    }
    Blocks apply_at(const std::vector<double> &y) const {
        Blocks r;
        for (auto n : sf_.sizes) {
            r.emplace_back(n, n);
        }
        for (std::size_t b = 0; b < by_block_.size(); b++) {
            for (const auto &[i, a] : by_block_[b]) {
                if (y[i] != 0) {
                    r[b] += y[i] * *a;
                }
            }
        }
        return r;
    }

    std::optional<Scaling> nt_scaling(const RMatrix &x, const RMatrix &s) const;
    std::optional<RMatrix> schur(const std::vector<Scaling> &sc) const;
    void direction(const std::vector<Scaling> &sc, const RMatrix &chol_m, const std::vector<RMatrix> &rc,
                   const std::vector<double> &rp, const Blocks &rd, Blocks &dx, std::vector<double> &dy,
                   Blocks &ds) const;
    double max_step(const std::vector<Scaling> &sc, const Blocks &dir, bool primal) const;
    static Blocks take_step(const Blocks &v, const Blocks &dir, double &step);

    const StandardForm &sf_;
    std::vector<const Row *> rows_;
    SdpOptions opts_;
    std::size_t m_;
    std::size_t n_total_ = 0;
    std::vector<double> b_;
    std::vector<std::vector<std::pair<std::size_t, const RMatrix *>>> by_block_;
    std::optional<RMatrix> gram_chol_;
};

std::optional<Scaling> InteriorPoint::nt_scaling(const RMatrix &x, const RMatrix &s) const {
    auto l = cholesky(x);
    auto r = cholesky(s);
    if (!l || !r) {
        return std::nullopt;
    }
    Svd svd = svd_jacobi(r->transpose() * *l);
    std::size_t n = x.rows();
    Scaling sc;
    sc.d = svd.s;
    for (double v : sc.d) {
        if (!(v > 0) || !std::isfinite(v)) {
            return std::nullopt;
        }
    }
    // G = L·V·Σ^{-1/2},  G⁻¹ = Σ^{1/2}·Vᵀ·L⁻¹.
    RMatrix lv = *l * svd.v;
    sc.g = RMatrix(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            sc.g(i, j) = lv(i, j) / std::sqrt(sc.d[j]);
        }
    }
    RMatrix vt_linv = svd.v.transpose() * lower_triangular_inverse(*l);
    sc.ginv = RMatrix(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            sc.ginv(i, j) = std::sqrt(sc.d[i]) * vt_linv(i, j);
        }
    }
    sc.w = symmetrize(sc.g * sc.g.transpose());
    return sc;
}

std::optional<RMatrix> InteriorPoint::schur(const std::vector<Scaling> &sc) const {
    RMatrix mm(m_, m_);
    for (std::size_t b = 0; b < by_block_.size(); b++) {
        const auto &list = by_block_[b];
        const RMatrix &w = sc[b].w;
        for (std::size_t jj = 0; jj < list.size(); jj++) {
            RMatrix waw = w * *list[jj].second * w;
            for (std::size_t ii = 0; ii <= jj; ii++) {
                double v = inner(*list[ii].second, waw);
                std::size_t i = list[ii].first;
                std::size_t j = list[jj].first;
                mm(i, j) += v;
                if (i != j) {
                    mm(j, i) += v;
                }
            }
        }
    }
    double diag_max = 0;
    for (std::size_t i = 0; i < m_; i++) {
        diag_max = std::max(diag_max, mm(i, i));
    }
    auto l = cholesky(mm);
    for (double reg = 1e-14; !l && reg <= 1e-8; reg *= 100) {
        RMatrix shifted = mm;
        for (std::size_t i = 0; i < m_; i++) {
            shifted(i, i) += reg * std::max(diag_max, 1.0);
        }
        l = cholesky(shifted);
    }
    return l;
}

void InteriorPoint::direction(const std::vector<Scaling> &sc, const RMatrix &chol_m, const std::vector<RMatrix> &rc,
                              const std::vector<double> &rp, const Blocks &rd, Blocks &dx, std::vector<double> &dy,
                              Blocks &ds) const {
    const std::size_t nb = sf_.sizes.size();
    Blocks t(nb);
    for (std::size_t b = 0; b < nb; b++) {
        const auto &d = sc[b].d;
        std::size_t n = d.size();
        RMatrix k(n, n);
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t j = 0; j < n; j++) {
                k(i, j) = 2 * rc[b](i, j) / (d[i] + d[j]);
            }
        }
        t[b] = symmetrize(sc[b].g * k * sc[b].g.transpose() - sc[b].w * rd[b] * sc[b].w);
    }
    std::vector<double> rhs = apply_a(t);
    for (std::size_t i = 0; i < m_; i++) {
        rhs[i] = rp[i] - rhs[i];
    }
    dy = cholesky_solve(chol_m, rhs);
    Blocks aty = apply_at(dy);
    dx.assign(nb, RMatrix());
    ds.assign(nb, RMatrix());
    for (std::size_t b = 0; b < nb; b++) {
        ds[b] = rd[b] - aty[b];
        dx[b] = symmetrize(t[b] + sc[b].w * aty[b] * sc[b].w);
    }
    // Iterative refinement: the Schur complement becomes badly conditioned
    // near the optimum, so the computed ΔX can miss A(ΔX) = r_p. Correct the
    // step with the exact operator as residual and M as preconditioner.
    for (int pass = 0; pass < 3; pass++) {
        std::vector<double> adx = apply_a(dx);
        std::vector<double> err(m_);
        double err_norm = 0;
        double rp_norm = 0;
        for (std::size_t i = 0; i < m_; i++) {
            err[i] = rp[i] - adx[i];
            err_norm = std::max(err_norm, std::abs(err[i]));
            rp_norm = std::max(rp_norm, std::abs(rp[i]));
        }
        if (err_norm <= 1e-15 * (1 + rp_norm)) {
            break;
        }
        std::vector<double> delta = cholesky_solve(chol_m, err);
        Blocks atd = apply_at(delta);
        for (std::size_t i = 0; i < m_; i++) {
            dy[i] += delta[i];
        }
        for (std::size_t b = 0; b < nb; b++) {
            ds[b] -= atd[b];
            dx[b] = symmetrize(dx[b] + sc[b].w * atd[b] * sc[b].w);
        }
    }
    // Whatever residual the Schur solve leaves is removed by a least-squares
    // projection onto A(ΔX) = r_p, so that inaccurate directions late in the
    // run cannot accumulate primal infeasibility.
    if (gram_chol_) {
        std::vector<double> adx = apply_a(dx);
        std::vector<double> err(m_);
        for (std::size_t i = 0; i < m_; i++) {
            err[i] = rp[i] - adx[i];
        }
        Blocks corr = apply_at(cholesky_solve(*gram_chol_, err));
        for (std::size_t b = 0; b < nb; b++) {
            dx[b] = symmetrize(dx[b] + corr[b]);
        }
    }
}

Blocks InteriorPoint::take_step(const Blocks &v, const Blocks &dir, double &step) {
    for (int tries = 0;; tries++) {
        Blocks next(v.size());
        bool interior = true;
        for (std::size_t b = 0; b < v.size() && interior; b++) {
            next[b] = symmetrize(v[b] + step * dir[b]);
            interior = cholesky(next[b]).has_value();
        }
        if (interior || tries == 30) {
            // After 30 reductions the step is negligible; the next scaling
            // reports the failure.
            return next;
        }
        step *= 0.5;
    }
}

double InteriorPoint::max_step(const std::vector<Scaling> &sc, const Blocks &dir, bool primal) const {
    double alpha = INFINITY;
    for (std::size_t b = 0; b < dir.size(); b++) {
        const Scaling &s = sc[b];
        // Scaled direction D^{-1/2}·Δ̃·D^{-1/2}, with Δ̃ = G⁻¹ΔXG⁻ᵀ (primal) or
        // GᵀΔSG (dual).
        RMatrix scaled = primal ? s.ginv * dir[b] * s.ginv.transpose() : s.g.transpose() * dir[b] * s.g;
        std::size_t n = s.d.size();
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t j = 0; j < n; j++) {
                scaled(i, j) /= std::sqrt(s.d[i] * s.d[j]);
            }
        }
        double lmin = n == 1 ? scaled(0, 0) : min_eigenvalue(symmetrize(scaled));
        if (lmin < 0) {
            alpha = std::min(alpha, -1 / lmin);
        }
    }
    return alpha;
}

double norm2(const std::vector<double> &v) {
    double s = 0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

double blocks_norm(const Blocks &bl) {
    double s = 0;
    for (const auto &m : bl) {
        double n = m.norm();
        s += n * n;
    }
    return std::sqrt(s);
}

double blocks_inner(const Blocks &a, const Blocks &b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); k++) {
        s += inner(a[k], b[k]);
    }
    return s;
}

SdpStatus InteriorPoint::run(Blocks &x, std::vector<double> &y, Blocks &s, SdpSolution &sol) {
    const std::size_t nb = sf_.sizes.size();
    const double b_norm = norm2(b_);
    const double c_norm = blocks_norm(sf_.c);
    double b_inf = 0;
    for (double v : b_) {
        b_inf = std::max(b_inf, std::abs(v));
    }
    const double tau = 1 + b_inf;
    x.clear();
    s.clear();
    for (auto n : sf_.sizes) {
        x.push_back(tau * RMatrix::identity(n));
        s.push_back(tau * RMatrix::identity(n));
    }
    y.assign(m_, 0.0);

    std::size_t stalls = 0;
    for (std::size_t iter = 0;; iter++) {
        sol.iterations = iter;
        std::vector<double> ax = apply_a(x);
        std::vector<double> rp(m_);
        for (std::size_t i = 0; i < m_; i++) {
            rp[i] = b_[i] - ax[i];
        }
        Blocks aty = apply_at(y);
        Blocks rd(nb);
        for (std::size_t b = 0; b < nb; b++) {
            rd[b] = sf_.c[b] - aty[b] - s[b];
        }
        double pobj = blocks_inner(sf_.c, x);
        double dobj = 0;
        for (std::size_t i = 0; i < m_; i++) {
            dobj += b_[i] * y[i];
        }
        double xs = blocks_inner(x, s);
        double mu = xs / static_cast<double>(n_total_);
        double pinf = norm2(rp) / (1 + b_norm);
        double dinf = blocks_norm(rd) / (1 + c_norm);
        double rel_gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
        sol.duality_gap = std::abs(pobj - dobj);
        sol.dual_objective = dobj;
        if (opts_.record_trace) {
            sol.trace.push_back({pobj, dobj, pinf, dinf, xs, NAN, NAN});
        }
        if (pinf <= opts_.feas_tol && dinf <= opts_.feas_tol && rel_gap <= opts_.gap_tol) {
            return SdpStatus::Optimal;
        }
        // Improving rays: a dual ray (bᵀy > 0 with Aᵀy + S ≈ 0) proves primal
        // infeasibility; a primal ray (⟨C,X⟩ < 0 with A(X) ≈ 0) proves dual
        // infeasibility, i.e. an unbounded primal.
        if (dobj > 0 && blocks_norm(aty) > 0) {
            Blocks ray(nb);
            for (std::size_t b = 0; b < nb; b++) {
                ray[b] = aty[b] + s[b];
            }
            if (blocks_norm(ray) / dobj <= opts_.feas_tol && pinf > opts_.feas_tol) {
                sol.message = "dual improving ray found";
                return SdpStatus::PrimalInfeasible;
            }
        }
        if (pobj < 0 && norm2(ax) / -pobj <= opts_.feas_tol && dinf > opts_.feas_tol) {
            sol.message = "primal improving ray found";
            return SdpStatus::DualInfeasible;
        }
        if (iter >= opts_.max_iter) {
            return SdpStatus::MaxIterations;
        }

        std::vector<Scaling> sc;
        sc.reserve(nb);
        for (std::size_t b = 0; b < nb; b++) {
            auto scb = nt_scaling(x[b], s[b]);
            if (!scb) {
                sol.message = "iterate left the cone interior";
                return SdpStatus::NumericalFailure;
            }
            sc.push_back(std::move(*scb));
        }
        auto chol_m = schur(sc);
        if (!chol_m) {
            sol.message = "Schur complement is not positive definite";
            return SdpStatus::NumericalFailure;
        }

        // Predictor: aim at complementarity zero.
        std::vector<RMatrix> rc(nb);
        for (std::size_t b = 0; b < nb; b++) {
            std::size_t n = sc[b].d.size();
            rc[b] = RMatrix(n, n);
            for (std::size_t i = 0; i < n; i++) {
                rc[b](i, i) = -sc[b].d[i] * sc[b].d[i];
            }
        }
        Blocks dx, ds;
        std::vector<double> dy;
        direction(sc, *chol_m, rc, rp, rd, dx, dy, ds);
        double ap = std::min(1.0, max_step(sc, dx, true));
        double ad = std::min(1.0, max_step(sc, ds, false));
        double mu_aff = 0;
        for (std::size_t b = 0; b < nb; b++) {
            mu_aff += inner(x[b] + ap * dx[b], s[b] + ad * ds[b]);
        }
        mu_aff /= static_cast<double>(n_total_);
        double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3), 0.0, 1.0);

        // Corrector with centering and the second-order term.
        for (std::size_t b = 0; b < nb; b++) {
            RMatrix dxs = sc[b].ginv * dx[b] * sc[b].ginv.transpose();
            RMatrix dss = sc[b].g.transpose() * ds[b] * sc[b].g;
            RMatrix prod = symmetrize(dxs * dss);
            std::size_t n = sc[b].d.size();
            for (std::size_t i = 0; i < n; i++) {
                for (std::size_t j = 0; j < n; j++) {
                    rc[b](i, j) = -prod(i, j);
                }
                rc[b](i, i) += sigma * mu - sc[b].d[i] * sc[b].d[i];
            }
        }
        direction(sc, *chol_m, rc, rp, rd, dx, dy, ds);
        ap = std::min(1.0, 0.98 * max_step(sc, dx, true));
        ad = std::min(1.0, 0.98 * max_step(sc, ds, false));
        // The step-length bound is computed in the scaled space; close to the
        // boundary it can overshoot by roundoff. Back off until every block
        // still factorizes.
        x = take_step(x, dx, ap);
        s = take_step(s, ds, ad);
        if (opts_.record_trace) {
            sol.trace.back().step_primal = ap;
            sol.trace.back().step_dual = ad;
        }
        for (std::size_t i = 0; i < m_; i++) {
            y[i] += ad * dy[i];
        }
        if (ap < 1e-10 && ad < 1e-10) {
            if (++stalls >= 3) {
                sol.message = "step lengths collapsed";
                return SdpStatus::NumericalFailure;
            }
        } else {
            stalls = 0;
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

SdpSolution solve(const SdpProblem &problem, const SdpOptions &opts) {
    StandardForm sf = to_standard_form(problem);
    SdpSolution sol;
    Presolved pre = presolve(sf);
    sol.dropped_constraints = pre.dropped;
    sol.duals.assign(problem.constraints().size(), 0.0);
    auto unpack = [&](const Blocks &x) {
        sol.blocks.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(sf.user_blocks));
        sol.scalars.clear();
        for (const auto &sm : sf.scalars) {
            double v = x[sm.block](0, 0);
            switch (sm.kind) {
                case ScalarMap::Kind::Lower:
                    sol.scalars.push_back(sm.bound + v);
                    break;
                case ScalarMap::Kind::Upper:
                    sol.scalars.push_back(sm.bound - v);
                    break;
                case ScalarMap::Kind::Free:
                    sol.scalars.push_back(v - x[sm.neg_block](0, 0));
                    break;
            }
        }
        sol.objective = problem.evaluate(problem.objective(), sol.blocks, sol.scalars);
        sol.max_residual = 0;
        for (const auto &c : problem.constraints()) {
            double r = problem.evaluate(c.form, sol.blocks, sol.scalars) - c.rhs;
            sol.max_residual = std::max(sol.max_residual, std::abs(r));
        }
    };
    if (pre.inconsistent) {
        sol.status = SdpStatus::PrimalInfeasible;
        sol.message = "presolve: " + pre.message;
        Blocks zero;
        for (auto n : sf.sizes) {
            zero.emplace_back(n, n);
        }
        unpack(zero);
        return sol;
    }
    std::vector<const Row *> rows;
    for (auto i : pre.kept) {
        rows.push_back(&sf.rows[i]);
    }
    InteriorPoint ipm(sf, rows, opts);
    Blocks x, s;
    std::vector<double> y;
    sol.status = ipm.run(x, y, s, sol);
    unpack(x);
    for (std::size_t k = 0; k < rows.size(); k++) {
        if (rows[k]->user_index != kInternalRow) {
            sol.duals[rows[k]->user_index] = y[k];
        }
    }
    sol.dual_objective = -sol.dual_objective + sf.offset;
    return sol;
}

VerifyReport verify(const SdpProblem &problem, const SdpSolution &solution, const SdpOptions &opts) {
    VerifyReport rep;
    const double feas = 10 * opts.feas_tol;
    const double gap = 10 * opts.gap_tol;
    if (solution.status != SdpStatus::Optimal) {
        rep.ok = false;
        rep.issues.push_back(std::string("status is ") + to_string(solution.status));
    }
    if (solution.blocks.size() != problem.blocks().size() || solution.scalars.size() != problem.scalars().size()) {
        rep.ok = false;
        rep.issues.push_back("solution shape does not match the problem");
        return rep;
    }
    double rhs_scale = 0;
    for (const auto &c : problem.constraints()) {
        rhs_scale = std::max(rhs_scale, std::abs(c.rhs));
        double r = problem.evaluate(c.form, solution.blocks, solution.scalars) - c.rhs;
        rep.max_residual = std::max(rep.max_residual, std::abs(r));
    }
    if (rep.max_residual > feas * (1 + rhs_scale)) {
        rep.ok = false;
        rep.issues.push_back("equality residual " + std::to_string(rep.max_residual) + " exceeds tolerance");
    }
    rep.min_block_eigenvalue = INFINITY;
    for (std::size_t b = 0; b < problem.blocks().size(); b++) {
        const RMatrix &x = solution.blocks[b];
        if (x.rows() != problem.blocks()[b].size || !x.is_square()) {
            rep.ok = false;
            rep.issues.push_back("block '" + problem.blocks()[b].name + "' has the wrong size");
            continue;
        }
        double asym = 0;
        for (std::size_t i = 0; i < x.rows(); i++) {
            for (std::size_t j = 0; j < i; j++) {
                asym = std::max(asym, std::abs(x(i, j) - x(j, i)));
            }
        }
        if (asym > feas) {
            rep.ok = false;
            rep.issues.push_back("block '" + problem.blocks()[b].name + "' is not symmetric");
        }
        double lmin = min_eigenvalue(symmetrize(x));
        rep.min_block_eigenvalue = std::min(rep.min_block_eigenvalue, lmin);
        if (lmin < -feas) {
            rep.ok = false;
            rep.issues.push_back("block '" + problem.blocks()[b].name + "' has eigenvalue " + std::to_string(lmin));
        }
    }
    for (std::size_t j = 0; j < problem.scalars().size(); j++) {
        const auto &sc = problem.scalars()[j];
        double v = solution.scalars[j];
        double viol = std::max({0.0, sc.lower - v, v - sc.upper});
        rep.scalar_bound_violation = std::max(rep.scalar_bound_violation, viol);
        if (viol > feas) {
            rep.ok = false;
            rep.issues.push_back("scalar '" + sc.name + "' violates its bounds by " + std::to_string(viol));
        }
    }
    double obj = problem.evaluate(problem.objective(), solution.blocks, solution.scalars);
    rep.objective_error = std::abs(obj - solution.objective);
    if (rep.objective_error > gap * (1 + std::abs(obj))) {
        rep.ok = false;
        rep.issues.push_back("reported objective differs from the recomputed value");
    }
    if (solution.duality_gap > gap * (1 + std::abs(obj) + std::abs(solution.dual_objective))) {
        rep.ok = false;
        rep.issues.push_back("duality gap " + std::to_string(solution.duality_gap) + " exceeds tolerance");
    }
    return rep;
}

void write_sdpa(std::ostream &out, const SdpProblem &problem) {
    StandardForm sf = to_standard_form(problem);
    Presolved pre = presolve(sf);
    auto old_precision = out.precision(17);
    out << "* nlact SDP in SDPA sparse format (F0 = objective to maximize, constant offset " << sf.offset << ")\n";
    if (pre.dropped > 0) {
        out << "* " << pre.dropped << " redundant constraint(s) removed\n";
    }
    std::vector<std::size_t> kept = pre.inconsistent ? std::vector<std::size_t>{} : pre.kept;
    if (pre.inconsistent) {
        kept.resize(sf.rows.size());
        for (std::size_t i = 0; i < kept.size(); i++) {
            kept[i] = i;
        }
    }
    out << kept.size() << "\n" << sf.sizes.size() << "\n";
    for (std::size_t b = 0; b < sf.sizes.size(); b++) {
        out << sf.sizes[b] << (b + 1 < sf.sizes.size() ? " " : "\n");
    }
    for (std::size_t k = 0; k < kept.size(); k++) {
        out << sf.rows[kept[k]].rhs << (k + 1 < kept.size() ? " " : "\n");
    }
    if (kept.empty()) {
        out << "\n";
    }
    auto emit = [&](std::size_t mat, std::size_t block, const RMatrix &m, double sign) {
        for (std::size_t i = 0; i < m.rows(); i++) {
            for (std::size_t j = i; j < m.cols(); j++) {
                if (m(i, j) != 0) {
                    out << mat << ' ' << block + 1 << ' ' << i + 1 << ' ' << j + 1 << ' ' << sign * m(i, j) << '\n';
                }
            }
        }
    };
    for (std::size_t b = 0; b < sf.sizes.size(); b++) {
        emit(0, b, sf.c[b], -1.0);
    }
    for (std::size_t k = 0; k < kept.size(); k++) {
        for (const auto &p : sf.rows[kept[k]].parts) {
            emit(k + 1, p.block, p.m, 1.0);
        }
    }
    out.precision(old_precision);
}

}  // namespace nlact
