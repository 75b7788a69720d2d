#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <optional>
#include <string>

#include "strata/equilibrium.hpp"
#include "strata/forcing.hpp"
#include "strata/pipeline.hpp"
#include "strata/state.hpp"

namespace strata {

using pipeline::PrincipalOptions;

// Frozen linearization point: the solution triple, the data it rides with,
// and every coefficient field the derivative needs (cached on the dealiased
// evaluation grid).
struct Background {
    State w0;
    Forcing forcing;
    PhysicalParams params;
    EquilibriumProfile profile;
    std::shared_ptr<const pipeline::Core> core;

    double gamma() const { return forcing.gamma; }
    const Grid& grid() const { return w0.grid(); }
};

Background make_background(const State& w0, const Forcing& forcing,
                           const PhysicalParams& params, const EquilibriumProfile& profile);

// analytic directional derivative of the traveling-wave operator
Residual derivative_apply(const Background& bg, const State& dir,
                          const Forcing* forcing_dir = nullptr, double gamma_dir = 0.0);

// derivative-loss vector field v_{w0}
std::array<SlabField, 2> v_field(const Background& bg);

// principal part (optionally elliptically regularized / homotopy-weighted)
Residual principal_apply(const Background& bg, const State& dir,
                         const PrincipalOptions& opt = {});

// ---------------------------------------------------------------------------
// Discrete direct solves.
//
// Unknowns are packed as real horizontal-mode dofs (mean, then cos/sin pairs
// per mode, Nyquist dropped), mode-major with per-mode blocks
// [q(nz), u0(nz), u1(nz), eta(1 for k > 0)].  Equation rows mirror that
// layout: continuity collocated on all vertical nodes (interior ones only
// when the 2m-order regularization adds Neumann rows), momentum collocated
// in the interior with bottom Dirichlet rows and the dynamic boundary
// condition on top, and the kinematic row bordering each eta dof.  The
// unregularized variant replaces the top k = 0 continuity row with a pin of
// the q mean, which removes the spurious collocation kernel of that block.
class DofMap {
  public:
    DofMap(const Grid& g, const PrincipalOptions& reg);

    std::size_t size() const { return size_; }
    const Grid& grid() const { return grid_; }
    const PrincipalOptions& reg() const { return reg_; }

    Eigen::VectorXd pack_state(const State& w) const;
    State unpack_state(const Eigen::VectorXd& v) const;

    // rhs: equation rows from the data triple, constraint rows zero
    Eigen::VectorXd pack_data(const Residual& r) const;
    // matrix column: equation rows from the image, constraint rows from the
    // direction itself
    Eigen::VectorXd pack_equation(const Residual& image, const State& dir) const;

  private:
    Grid grid_;
    PrincipalOptions reg_;
    std::size_t size_ = 0;
    std::size_t block_(std::size_t md) const;  // offset of a mode-dof block
    friend class ModeBlockOperator;
};

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;
    bool used_fallback = false;
};

// Per-horizontal-mode direct factorization of the operator at the trivial
// background (coefficients depend on y only, so modes decouple).  Doubles as
// the exact fast-path solver at w0 = 0 and as the preconditioner for
// defect-correction solves at general backgrounds.
class ModeBlockOperator {
  public:
    ModeBlockOperator(const Grid& g, const PhysicalParams& params,
                      const EquilibriumProfile& profile, double gamma,
                      const PrincipalOptions& reg = {});

    State solve(const Residual& data) const;
    const DofMap& dofs() const { return map_; }

  private:
    Grid grid_;
    DofMap map_;
    double gamma_;
    PrincipalOptions reg_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu_;  // per mode k >= 1
    Eigen::PartialPivLU<Eigen::MatrixXd> lu0_;               // k = 0 (real)
};

// Column-assembled sparse operator at a general background.
class AssembledOperator {
  public:
    const DofMap& dofs() const { return map_; }
    const Eigen::SparseMatrix<double>& matrix() const { return mat_; }
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return mat_ * x; }
    // backward-stable solve with one step of iterative refinement
    Eigen::VectorXd solve_vec(const Eigen::VectorXd& rhs) const;
    State solve(const Residual& data) const;
    double condition_estimate() const { return cond_; }
    // coordinate (row, col, value) dump for external inspection
    void dump_coordinate(const std::string& path) const;

  private:
    friend AssembledOperator assemble(const Background&, const PrincipalOptions&, bool);
    DofMap map_{Grid(), PrincipalOptions{}};
    Eigen::SparseMatrix<double> mat_;
    std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
    double cond_ = 0.0;
};

// full = true assembles the complete derivative (including the forcing Q
// terms); full = false assembles the principal part only
AssembledOperator assemble(const Background& bg, const PrincipalOptions& reg = {},
                           bool full = true);

State solve(const AssembledOperator& op, const Residual& data);

// Right/left inverse of the full derivative at a background: defect
// correction preconditioned by the trivial-background mode blocks, falling
// back to a dense column assembly when the contraction stalls.
class DerivativeSolver {
  public:
    DerivativeSolver(const Background& bg, std::shared_ptr<const ModeBlockOperator> pre);

    State solve(const Residual& y, SolveStats* stats = nullptr) const;
    const Background& background() const { return bg_; }

  private:
    Background bg_;
    std::shared_ptr<const ModeBlockOperator> pre_;
    mutable std::shared_ptr<AssembledOperator> fallback_;
};

}  // namespace strata
