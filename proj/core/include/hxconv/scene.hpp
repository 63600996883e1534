#pragma once
// Analytic set descriptions ("scenes") and their compiled restrictions.
//
// A SceneSet is a boolean tree over a handful of primitive membership
// predicates on the flattened ambient space R^{4n}: half-spaces and slabs
// (linear), quadratic sublevel/shell sets, balls, and lookups into already
// discretized VoxelSets.  The one operation everything downstream relies on
// is RESTRICTION: given an affine embedding u -> A u + b of a low-dimensional
// parameter space (a frame's window, or a line), the whole tree is compiled
// once into predicates on u — each linear leaf becomes a d-dimensional
// linear form, each quadratic leaf a d x d quadratic form, each voxel leaf a
// composed affine lookup.  Rasterizing a section then costs a few flops per
// leaf per cell instead of a full ambient-space evaluation.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "hxconv/util.hpp"
#include "hxconv/voxel.hpp"

namespace hxconv {

// How a scalar leaf value v relates to the admissible region; tau is slack.
//   kLE:    v <= tau
//   kGE:    v >= -tau
//   kShell: |v| <= tau
enum class Relation : std::uint8_t { kLE, kGE, kShell };

struct SceneNode {
  enum class Kind : std::uint8_t {
    kConst,
    kAnd,
    kOr,
    kNot,
    kLinear,       // v = g . x + offset
    kQuad,         // v = sum q_i x_{r_i} x_{c_i} + g . x + offset
    kBall,         // v = |x - center|^2 - radius^2
    kVoxelLookup,  // membership bit of the cell at to_local(x); off-window = out
    kVoxelSlab,    // within slab_tau of the voxel frame AND cell bit set
  };

  struct QuadTerm {
    std::uint32_t r = 0;
    std::uint32_t c = 0;
    double coef = 0.0;
  };

  Kind kind = Kind::kConst;

  bool value = false;                                     // kConst
  std::vector<std::shared_ptr<const SceneNode>> children;  // kAnd/kOr/kNot

  std::vector<double> lin_g;  // kLinear (size 4n)
  double lin_off = 0.0;

  std::vector<QuadTerm> quad_terms;  // kQuad
  std::vector<double> quad_g;        // size 4n or empty
  double quad_off = 0.0;

  std::vector<double> center;  // kBall (size 4n)
  double radius = 0.0;

  Relation rel = Relation::kLE;  // kLinear/kQuad/kBall
  double tau = 0.0;

  std::shared_ptr<const VoxelSet> vox;  // kVoxelLookup/kVoxelSlab
  Affine vox_to_local;                   // kVoxelLookup: ambient -> voxel local
  double slab_tau = 0.0;                 // kVoxelSlab
};

using SceneNodePtr = std::shared_ptr<const SceneNode>;

SceneNodePtr scene_const(bool value);
SceneNodePtr scene_and(std::vector<SceneNodePtr> children);
SceneNodePtr scene_or(std::vector<SceneNodePtr> children);
SceneNodePtr scene_not(SceneNodePtr child);
SceneNodePtr scene_linear(std::vector<double> g, double offset, Relation rel,
                          double tau = 0.0);
SceneNodePtr scene_quad(std::vector<SceneNode::QuadTerm> terms,
                        std::vector<double> g, double offset, Relation rel,
                        double tau = 0.0);
SceneNodePtr scene_ball(std::vector<double> center, double radius, Relation rel,
                        double tau = 0.0);
// Membership = bit of the voxel cell containing to_local(x); outside the
// voxel window counts as outside the set.  If the voxel frame is a proper
// subspace, the set this leaf describes is the CYLINDER over the voxel set
// (no residual-distance check).
SceneNodePtr scene_voxel_lookup(std::shared_ptr<const VoxelSet> vox,
                                Affine ambient_to_local);
// Membership = |x - closest frame point| <= slab_tau AND the cell at the
// projected local coordinates is set.  This is the standard way to read a
// frame-restricted discretized set as a thin solid in the ambient space.
SceneNodePtr scene_voxel_slab(std::shared_ptr<const VoxelSet> vox,
                              double slab_tau);

struct SceneBound {
  std::vector<double> center;  // size 4n
  double radius = 0.0;
};

struct SceneSet {
  std::size_t ambient_n = 0;  // quaternionic dimension
  SceneNodePtr root;
  // Optional certificate: the set is contained in this ball.  Used for
  // automatic windows and for proving line sections bounded.
  std::optional<SceneBound> bound;
};

// Direct (uncompiled) membership test of an ambient point; reference
// semantics for the compiled path.
bool scene_contains(const SceneSet& scene, const std::vector<double>& ambient);

// ---------------------------------------------------------------------------
// Compiled restriction.
// ---------------------------------------------------------------------------
class CompiledPredicate {
 public:
  virtual ~CompiledPredicate() = default;
  // u points at local_dim doubles.
  virtual bool eval(const double* u) const = 0;
};

// Restrict the scene through the affine embedding u -> A u + b
// (embed.rows == 4 * ambient_n).  The result evaluates membership of the
// ambient image point directly from u.
std::unique_ptr<CompiledPredicate> compile_restricted(const SceneSet& scene,
                                                      const Affine& embed);

// Ambient -> local affine of a frame: u = axes^T (x - origin).
Affine frame_pullback_affine(const Frame& frame);

// Projection of R^{total} onto `count` coordinates starting at `offset`.
Affine block_projection(std::size_t total, std::size_t offset, std::size_t count);

// ---------------------------------------------------------------------------
// Ready-made scenes.
// ---------------------------------------------------------------------------

// Cylinder-product of two discretized sets: the subset of H^{n1+n2} whose
// first block lies in e1 and second block in e2 (each factor read as a
// cylinder over its frame).  The bound is derived from the factor windows.
SceneSet product_scene(std::shared_ptr<const VoxelSet> e1,
                       std::shared_ptr<const VoxelSet> e2);

// A discretized set re-read as an analytic scene (slab semantics when its
// frame is a proper subspace, plain cylinder lookup when it is full).
// slab_tau <= 0 picks 0.75 * cell diagonal.
SceneSet scene_from_voxels(std::shared_ptr<const VoxelSet> vox,
                           double slab_tau = 0.0);

}  // namespace hxconv
