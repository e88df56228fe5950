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

// Dense primal-dual interior-point solver for small semidefinite programs.
//
// Problems are stated in a modelling form: named real symmetric PSD blocks,
// bounded scalars, a linear objective to maximize, and affine equalities.
// Internally everything is converted to the standard form
//
//     minimize ⟨C, X⟩  subject to  ⟨A_i, X⟩ = b_i,  X ⪰ 0
//
// over a block-diagonal X, and solved with Nesterov–Todd scaling and a
// Mehrotra predictor–corrector.

#ifndef NLACT_SDP_H
#define NLACT_SDP_H

#include <cmath>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "nlact/matcore.h"

namespace nlact {

struct BlockId {
    std::size_t index;
};
struct ScalarId {
    std::size_t index;
};

/// Complex Hermitian n×n variable carried by a real 2n×2n PSD block. For a
/// real block X = [[X₁₁, X₁₂], [X₂₁, X₂₂]] the represented matrix is
/// H = (X₁₁ + X₂₂)/2 + i(X₂₁ − X₁₂)/2, which is PSD whenever X is.
struct HermBlock {
    BlockId block;
    std::size_t n;
};

/// Linear functional over block entries and scalars.
class LinearForm {
   public:
    struct BlockTerm {
        std::size_t block, row, col;
        double value;
    };
    struct ScalarTerm {
        std::size_t scalar;
        double value;
    };

    /// Adds value·X(row, col). Since X is symmetric, (row, col) and (col, row)
    /// address the same variable.
    LinearForm &add(BlockId b, std::size_t row, std::size_t col, double value);
    LinearForm &add(ScalarId s, double value);
    /// Adds value·Re H(row, col) or value·Im H(row, col).
    LinearForm &add_re(HermBlock h, std::size_t row, std::size_t col, double value);
    LinearForm &add_im(HermBlock h, std::size_t row, std::size_t col, double value);

    const std::vector<BlockTerm> &block_terms() const {
        return block_terms_;
    }
    const std::vector<ScalarTerm> &scalar_terms() const {
        return scalar_terms_;
    }
    bool empty() const {
        return block_terms_.empty() && scalar_terms_.empty();
    }

   private:
    std::vector<BlockTerm> block_terms_;
    std::vector<ScalarTerm> scalar_terms_;
};

/// A complex-valued linear expression, kept as its real and imaginary parts.
struct ComplexLinearForm {
    LinearForm re;
    LinearForm im;

    /// Adds coeff·H(row, col).
    ComplexLinearForm &add(HermBlock h, std::size_t row, std::size_t col, cplx coeff);
    /// Adds coeff·s for a real scalar s.
    ComplexLinearForm &add(ScalarId s, cplx coeff);
};

class SdpProblem {
   public:
    struct Block {
        std::string name;
        std::size_t size;
    };
    struct Scalar {
        std::string name;
        double lower;
        double upper;
    };
    struct Constraint {
        LinearForm form;
        double rhs;
    };

    BlockId add_block(std::string name, std::size_t size);
    HermBlock add_hermitian_block(std::string name, std::size_t n);
    ScalarId add_scalar(std::string name, double lower = -std::numeric_limits<double>::infinity(),
                        double upper = std::numeric_limits<double>::infinity());

    /// The objective is maximized.
    void set_objective(LinearForm f);
    void add_constraint(LinearForm f, double rhs);
    /// Adds Re(f) = Re(rhs) and, unless `real_only`, Im(f) = Im(rhs).
    void add_constraint(const ComplexLinearForm &f, cplx rhs, bool real_only = false);

    const std::vector<Block> &blocks() const {
        return blocks_;
    }
    const std::vector<Scalar> &scalars() const {
        return scalars_;
    }
    const LinearForm &objective() const {
        return objective_;
    }
    const std::vector<Constraint> &constraints() const {
        return constraints_;
    }

    /// Evaluates a linear form at the given variable values.
    double evaluate(const LinearForm &f, const std::vector<RMatrix> &blocks, const std::vector<double> &scalars) const;

   private:
    void check(const LinearForm &f) const;

    std::vector<Block> blocks_;
    std::vector<Scalar> scalars_;
    LinearForm objective_;
    std::vector<Constraint> constraints_;
};

enum class SdpStatus { Optimal, PrimalInfeasible, DualInfeasible, MaxIterations, NumericalFailure };

const char *to_string(SdpStatus s);

struct SdpOptions {
    double gap_tol = 1e-8;
    double feas_tol = 1e-8;
    std::size_t max_iter = 200;
    /// Record per-iterate diagnostics in SdpSolution::trace.
    bool record_trace = false;
};

/// Diagnostics of one interior-point iterate, in the internal minimization
/// form (primal ⟨C,X⟩, dual bᵀy).
struct IterateInfo {
    double primal_objective;
    double dual_objective;
    double primal_infeasibility;
    double dual_infeasibility;
    /// ⟨X, S⟩ of the current iterate.
    double complementarity;
    double step_primal;
    double step_dual;
};

struct SdpSolution {
    SdpStatus status = SdpStatus::NumericalFailure;
    std::vector<RMatrix> blocks;
    std::vector<double> scalars;
    /// Dual multiplier of each user constraint (zero for rows removed as
    /// redundant by presolve).
    std::vector<double> duals;
    double objective = 0;
    double dual_objective = 0;
    double duality_gap = 0;
    double max_residual = 0;
    std::size_t iterations = 0;
    std::size_t dropped_constraints = 0;
    std::string message;
    std::vector<IterateInfo> trace;

    const RMatrix &block(BlockId b) const {
        return blocks.at(b.index);
    }
    double scalar(ScalarId s) const {
        return scalars.at(s.index);
    }
    CMatrix hermitian(HermBlock h) const;
};

SdpSolution solve(const SdpProblem &problem, const SdpOptions &opts = {});

struct VerifyReport {
    bool ok = true;
    double max_residual = 0;
    double min_block_eigenvalue = 0;
    double scalar_bound_violation = 0;
    double objective_error = 0;
    std::vector<std::string> issues;
};

/// Independently recomputes the equality residuals, block eigenvalue floors,
/// scalar bounds and objective value of a solution claiming optimality, and
/// flags violations beyond 10× the solver tolerances.
VerifyReport verify(const SdpProblem &problem, const SdpSolution &solution, const SdpOptions &opts = {});

/// Writes the internal standard form in SDPA sparse format: the primal
/// "max ⟨F₀, Y⟩ s.t. ⟨F_i, Y⟩ = c_i, Y ⪰ 0" with one line per upper-triangle
/// nonzero "matrix block row col value" (1-based).
void write_sdpa(std::ostream &out, const SdpProblem &problem);

}  // namespace nlact

#endif
