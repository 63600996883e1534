#include "hxconv/scene.hpp"

#include <cmath>
#include <stdexcept>

namespace hxconv {

namespace {

std::shared_ptr<SceneNode> make_node(SceneNode::Kind kind) {
  auto n = std::make_shared<SceneNode>();
  n->kind = kind;
  return n;
}

bool rel_check(double v, Relation rel, double tau) {
  switch (rel) {
    case Relation::kLE: return v <= tau;
    case Relation::kGE: return v >= -tau;
    case Relation::kShell: return std::abs(v) <= tau;
  }
  return false;
}

}  // namespace

SceneNodePtr scene_const(bool value) {
  auto n = make_node(SceneNode::Kind::kConst);
  n->value = value;
  return n;
}

SceneNodePtr scene_and(std::vector<SceneNodePtr> children) {
  if (children.empty()) throw std::invalid_argument("scene_and: no children");
  auto n = make_node(SceneNode::Kind::kAnd);
  n->children = std::move(children);
  return n;
}

SceneNodePtr scene_or(std::vector<SceneNodePtr> children) {
  if (children.empty()) throw std::invalid_argument("scene_or: no children");
  auto n = make_node(SceneNode::Kind::kOr);
  n->children = std::move(children);
  return n;
}

SceneNodePtr scene_not(SceneNodePtr child) {
  if (!child) throw std::invalid_argument("scene_not: null child");
  auto n = make_node(SceneNode::Kind::kNot);
  n->children.push_back(std::move(child));
  return n;
}

SceneNodePtr scene_linear(std::vector<double> g, double offset, Relation rel,
                          double tau) {
  auto n = make_node(SceneNode::Kind::kLinear);
  n->lin_g = std::move(g);
  n->lin_off = offset;
  n->rel = rel;
  n->tau = tau;
  return n;
}

SceneNodePtr scene_quad(std::vector<SceneNode::QuadTerm> terms,
                        std::vector<double> g, double offset, Relation rel,
                        double tau) {
  auto n = make_node(SceneNode::Kind::kQuad);
  n->quad_terms = std::move(terms);
  n->quad_g = std::move(g);
  n->quad_off = offset;
  n->rel = rel;
  n->tau = tau;
  return n;
}

SceneNodePtr scene_ball(std::vector<double> center, double radius, Relation rel,
                        double tau) {
  auto n = make_node(SceneNode::Kind::kBall);
  n->center = std::move(center);
  n->radius = radius;
  n->rel = rel;
  n->tau = tau;
  return n;
}

SceneNodePtr scene_voxel_lookup(std::shared_ptr<const VoxelSet> vox,
                                Affine ambient_to_local) {
  if (!vox) throw std::invalid_argument("scene_voxel_lookup: null voxels");
  if (ambient_to_local.rows != vox->grid.dim()) {
    throw std::invalid_argument("scene_voxel_lookup: affine/grid mismatch");
  }
  auto n = make_node(SceneNode::Kind::kVoxelLookup);
  n->vox = std::move(vox);
  n->vox_to_local = std::move(ambient_to_local);
  return n;
}

SceneNodePtr scene_voxel_slab(std::shared_ptr<const VoxelSet> vox,
                              double slab_tau) {
  if (!vox) throw std::invalid_argument("scene_voxel_slab: null voxels");
  if (!(slab_tau > 0.0)) {
    throw std::invalid_argument("scene_voxel_slab: slab_tau must be positive");
  }
  auto n = make_node(SceneNode::Kind::kVoxelSlab);
  n->vox = std::move(vox);
  n->slab_tau = slab_tau;
  return n;
}

// ---------------------------------------------------------------------------
// Direct membership (reference semantics).
// ---------------------------------------------------------------------------

namespace {

bool node_contains(const SceneNode& node, const std::vector<double>& x) {
  switch (node.kind) {
    case SceneNode::Kind::kConst:
      return node.value;
    case SceneNode::Kind::kAnd:
      for (const auto& c : node.children) {
        if (!node_contains(*c, x)) return false;
      }
      return true;
    case SceneNode::Kind::kOr:
      for (const auto& c : node.children) {
        if (node_contains(*c, x)) return true;
      }
      return false;
    case SceneNode::Kind::kNot:
      return !node_contains(*node.children.front(), x);
    case SceneNode::Kind::kLinear: {
      double v = node.lin_off;
      for (std::size_t c = 0; c < node.lin_g.size(); ++c) v += node.lin_g[c] * x[c];
      return rel_check(v, node.rel, node.tau);
    }
    case SceneNode::Kind::kQuad: {
      double v = node.quad_off;
      for (const auto& t : node.quad_terms) v += t.coef * x[t.r] * x[t.c];
      for (std::size_t c = 0; c < node.quad_g.size(); ++c) v += node.quad_g[c] * x[c];
      return rel_check(v, node.rel, node.tau);
    }
    case SceneNode::Kind::kBall: {
      double v = -node.radius * node.radius;
      for (std::size_t c = 0; c < node.center.size(); ++c) {
        const double d = x[c] - node.center[c];
        v += d * d;
      }
      return rel_check(v, node.rel, node.tau);
    }
    case SceneNode::Kind::kVoxelLookup: {
      const auto local = node.vox_to_local.apply(x);
      const auto cell = node.vox->cell_of_local(local);
      return cell && node.vox->get(*cell);
    }
    case SceneNode::Kind::kVoxelSlab: {
      const auto local = node.vox->frame.local_coords(x);
      const auto proj = node.vox->frame.to_ambient(local);
      double res_sq = 0.0;
      for (std::size_t c = 0; c < x.size(); ++c) {
        const double d = x[c] - proj[c];
        res_sq += d * d;
      }
      if (res_sq > node.slab_tau * node.slab_tau) return false;
      const auto cell = node.vox->cell_of_local(local);
      return cell && node.vox->get(*cell);
    }
  }
  return false;
}

}  // namespace

bool scene_contains(const SceneSet& scene, const std::vector<double>& ambient) {
  if (!scene.root) throw std::invalid_argument("scene_contains: empty scene");
  if (ambient.size() != 4 * scene.ambient_n) {
    throw std::invalid_argument("scene_contains: dimension mismatch");
  }
  return node_contains(*scene.root, ambient);
}

// ---------------------------------------------------------------------------
// Compiled restriction.
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxLocalDim = 16;

class CConst final : public CompiledPredicate {
 public:
  explicit CConst(bool v) : v_(v) {}
  bool eval(const double*) const override { return v_; }

 private:
  bool v_;
};

class CAnd final : public CompiledPredicate {
 public:
  explicit CAnd(std::vector<std::unique_ptr<CompiledPredicate>> kids)
      : kids_(std::move(kids)) {}
  bool eval(const double* u) const override {
    for (const auto& k : kids_) {
      if (!k->eval(u)) return false;
    }
    return true;
  }

 private:
  std::vector<std::unique_ptr<CompiledPredicate>> kids_;
};

class COr final : public CompiledPredicate {
 public:
  explicit COr(std::vector<std::unique_ptr<CompiledPredicate>> kids)
      : kids_(std::move(kids)) {}
  bool eval(const double* u) const override {
    for (const auto& k : kids_) {
      if (k->eval(u)) return true;
    }
    return false;
  }

 private:
  std::vector<std::unique_ptr<CompiledPredicate>> kids_;
};

class CNot final : public CompiledPredicate {
 public:
  explicit CNot(std::unique_ptr<CompiledPredicate> kid) : kid_(std::move(kid)) {}
  bool eval(const double* u) const override { return !kid_->eval(u); }

 private:
  std::unique_ptr<CompiledPredicate> kid_;
};

class CLin final : public CompiledPredicate {
 public:
  CLin(std::vector<double> g, double off, Relation rel, double tau)
      : g_(std::move(g)), off_(off), rel_(rel), tau_(tau) {}
  bool eval(const double* u) const override {
    double v = off_;
    for (std::size_t c = 0; c < g_.size(); ++c) v += g_[c] * u[c];
    return rel_check(v, rel_, tau_);
  }

 private:
  std::vector<double> g_;
  double off_;
  Relation rel_;
  double tau_;
};

class CQuad final : public CompiledPredicate {
 public:
  CQuad(std::size_t d, std::vector<double> q, std::vector<double> g, double off,
        Relation rel, double tau)
      : d_(d), q_(std::move(q)), g_(std::move(g)), off_(off), rel_(rel),
        tau_(tau) {}
  bool eval(const double* u) const override {
    double v = off_;
    for (std::size_t a = 0; a < d_; ++a) {
      double row = g_[a];
      const double* qrow = q_.data() + a * d_;
      for (std::size_t b = 0; b < d_; ++b) row += qrow[b] * u[b];
      v += row * u[a];
    }
    return rel_check(v, rel_, tau_);
  }

 private:
  std::size_t d_;
  std::vector<double> q_;  // d x d row-major
  std::vector<double> g_;  // d
  double off_;
  Relation rel_;
  double tau_;
};

// Shared cell lookup against a voxel grid from local coordinates.
inline bool voxel_bit_at(const VoxelSet& vox, const double* local) {
  std::uint64_t lin = 0;
  for (std::size_t a = 0; a < vox.grid.dim(); ++a) {
    const GridAxis& axis = vox.grid.axes[a];
    const double x = local[a];
    if (x < axis.lo || x >= axis.hi) return false;
    std::uint32_t i = static_cast<std::uint32_t>((x - axis.lo) / axis.step());
    if (i >= axis.cells) i = axis.cells - 1;  // guard hi-edge rounding
    lin = lin * axis.cells + i;
  }
  return vox.bits.get(lin);
}

class CVoxLookup final : public CompiledPredicate {
 public:
  CVoxLookup(std::shared_ptr<const VoxelSet> vox, Affine to_local)
      : vox_(std::move(vox)), to_local_(std::move(to_local)) {}
  bool eval(const double* u) const override {
    double local[kMaxLocalDim];
    to_local_.apply(u, local);
    return voxel_bit_at(*vox_, local);
  }

 private:
  std::shared_ptr<const VoxelSet> vox_;
  Affine to_local_;
};

class CVoxSlab final : public CompiledPredicate {
 public:
  CVoxSlab(std::shared_ptr<const VoxelSet> vox, Affine to_local,
           std::vector<double> amb_q, std::vector<double> amb_g, double amb_c,
           double slab_tau)
      : vox_(std::move(vox)), to_local_(std::move(to_local)), d_(to_local_.cols),
        amb_q_(std::move(amb_q)), amb_g_(std::move(amb_g)), amb_c_(amb_c),
        tau_sq_(slab_tau * slab_tau) {}
  bool eval(const double* u) const override {
    double local[kMaxLocalDim];
    to_local_.apply(u, local);
    // |x - origin|^2 as a quadratic in u, minus |P(x - origin)|^2, is the
    // squared residual distance to the frame subspace.
    double amb_sq = amb_c_;
    for (std::size_t a = 0; a < d_; ++a) {
      double row = amb_g_[a];
      const double* qrow = amb_q_.data() + a * d_;
      for (std::size_t b = 0; b < d_; ++b) row += qrow[b] * u[b];
      amb_sq += row * u[a];
    }
    double loc_sq = 0.0;
    for (std::size_t a = 0; a < to_local_.rows; ++a) loc_sq += local[a] * local[a];
    const double res_sq = amb_sq - loc_sq;
    if (res_sq > tau_sq_) return false;
    return voxel_bit_at(*vox_, local);
  }

 private:
  std::shared_ptr<const VoxelSet> vox_;
  Affine to_local_;
  std::size_t d_;
  std::vector<double> amb_q_;
  std::vector<double> amb_g_;
  double amb_c_;
  double tau_sq_;
};

// Restriction of |x - p|^2 through x = A u + b:
//   Q = A^T A, g = 2 A^T (b - p), c = |b - p|^2.
void restrict_sq_distance(const Affine& embed, const std::vector<double>& p,
                          std::vector<double>& q_out, std::vector<double>& g_out,
                          double& c_out) {
  const std::size_t d = embed.cols;
  const std::size_t m = embed.rows;
  q_out.assign(d * d, 0.0);
  g_out.assign(d, 0.0);
  c_out = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      double acc = 0.0;
      for (std::size_t r = 0; r < m; ++r) acc += embed.at(r, a) * embed.at(r, b);
      q_out[a * d + b] = acc;
    }
  }
  for (std::size_t r = 0; r < m; ++r) {
    const double diff = embed.b[r] - (p.empty() ? 0.0 : p[r]);
    for (std::size_t a = 0; a < d; ++a) g_out[a] += 2.0 * embed.at(r, a) * diff;
    c_out += diff * diff;
  }
}

std::unique_ptr<CompiledPredicate> compile_node(const SceneNode& node,
                                                const Affine& embed) {
  const std::size_t d = embed.cols;
  const std::size_t m = embed.rows;
  switch (node.kind) {
    case SceneNode::Kind::kConst:
      return std::make_unique<CConst>(node.value);
    case SceneNode::Kind::kAnd:
    case SceneNode::Kind::kOr: {
      std::vector<std::unique_ptr<CompiledPredicate>> kids;
      kids.reserve(node.children.size());
      for (const auto& c : node.children) kids.push_back(compile_node(*c, embed));
      if (node.kind == SceneNode::Kind::kAnd) {
        return std::make_unique<CAnd>(std::move(kids));
      }
      return std::make_unique<COr>(std::move(kids));
    }
    case SceneNode::Kind::kNot:
      return std::make_unique<CNot>(compile_node(*node.children.front(), embed));
    case SceneNode::Kind::kLinear: {
      if (node.lin_g.size() != m) {
        throw std::invalid_argument("compile: linear leaf dimension mismatch");
      }
      std::vector<double> g(d, 0.0);
      double off = node.lin_off;
      for (std::size_t r = 0; r < m; ++r) {
        off += node.lin_g[r] * embed.b[r];
        for (std::size_t a = 0; a < d; ++a) g[a] += node.lin_g[r] * embed.at(r, a);
      }
      return std::make_unique<CLin>(std::move(g), off, node.rel, node.tau);
    }
    case SceneNode::Kind::kQuad: {
      std::vector<double> q(d * d, 0.0);
      std::vector<double> g(d, 0.0);
      double off = node.quad_off;
      for (const auto& t : node.quad_terms) {
        if (t.r >= m || t.c >= m) {
          throw std::invalid_argument("compile: quad term index out of range");
        }
        // coef * x_r * x_c with x = A u + b.
        for (std::size_t a = 0; a < d; ++a) {
          for (std::size_t b2 = 0; b2 < d; ++b2) {
            q[a * d + b2] += t.coef * embed.at(t.r, a) * embed.at(t.c, b2);
          }
          g[a] += t.coef * (embed.at(t.r, a) * embed.b[t.c] +
                            embed.b[t.r] * embed.at(t.c, a));
        }
        off += t.coef * embed.b[t.r] * embed.b[t.c];
      }
      if (!node.quad_g.empty()) {
        if (node.quad_g.size() != m) {
          throw std::invalid_argument("compile: quad linear part mismatch");
        }
        for (std::size_t r = 0; r < m; ++r) {
          off += node.quad_g[r] * embed.b[r];
          for (std::size_t a = 0; a < d; ++a) {
            g[a] += node.quad_g[r] * embed.at(r, a);
          }
        }
      }
      return std::make_unique<CQuad>(d, std::move(q), std::move(g), off, node.rel,
                                     node.tau);
    }
    case SceneNode::Kind::kBall: {
      if (node.center.size() != m) {
        throw std::invalid_argument("compile: ball center dimension mismatch");
      }
      std::vector<double> q, g;
      double c = 0.0;
      restrict_sq_distance(embed, node.center, q, g, c);
      c -= node.radius * node.radius;
      return std::make_unique<CQuad>(d, std::move(q), std::move(g), c, node.rel,
                                     node.tau);
    }
    case SceneNode::Kind::kVoxelLookup: {
      Affine to_local = node.vox_to_local.compose(embed);
      if (to_local.rows > kMaxLocalDim || d > kMaxLocalDim) {
        throw std::invalid_argument("compile: local dimension too large");
      }
      return std::make_unique<CVoxLookup>(node.vox, std::move(to_local));
    }
    case SceneNode::Kind::kVoxelSlab: {
      Affine to_local = frame_pullback_affine(node.vox->frame).compose(embed);
      if (to_local.rows > kMaxLocalDim || d > kMaxLocalDim) {
        throw std::invalid_argument("compile: local dimension too large");
      }
      std::vector<double> q, g;
      double c = 0.0;
      restrict_sq_distance(embed, node.vox->frame.origin, q, g, c);
      return std::make_unique<CVoxSlab>(node.vox, std::move(to_local), std::move(q),
                                        std::move(g), c, node.slab_tau);
    }
  }
  throw std::logic_error("compile: unknown node kind");
}

}  // namespace

std::unique_ptr<CompiledPredicate> compile_restricted(const SceneSet& scene,
                                                      const Affine& embed) {
  if (!scene.root) throw std::invalid_argument("compile_restricted: empty scene");
  if (embed.rows != 4 * scene.ambient_n) {
    throw std::invalid_argument("compile_restricted: embedding rows != 4n");
  }
  if (embed.cols > kMaxLocalDim) {
    throw std::invalid_argument("compile_restricted: local dimension too large");
  }
  return compile_node(*scene.root, embed);
}

Affine frame_pullback_affine(const Frame& frame) {
  const std::size_t m = frame.ambient_real_dim();
  Affine out(frame.local_dim(), m);
  for (std::size_t a = 0; a < frame.local_dim(); ++a) {
    double dot_o = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      out.at(a, c) = frame.axes[a][c];
      dot_o += frame.axes[a][c] * frame.origin[c];
    }
    out.b[a] = -dot_o;
  }
  return out;
}

Affine block_projection(std::size_t total, std::size_t offset, std::size_t count) {
  if (offset + count > total) {
    throw std::invalid_argument("block_projection: block out of range");
  }
  Affine out(count, total);
  for (std::size_t r = 0; r < count; ++r) out.at(r, offset + r) = 1.0;
  return out;
}

namespace {

// Ambient-space ball certificate for the cells of a voxel window.
SceneBound window_bound(const VoxelSet& vox, double pad) {
  std::vector<double> mid(vox.grid.dim());
  double half_diag_sq = 0.0;
  for (std::size_t a = 0; a < vox.grid.dim(); ++a) {
    const auto& ax = vox.grid.axes[a];
    mid[a] = 0.5 * (ax.lo + ax.hi);
    const double h = 0.5 * (ax.hi - ax.lo);
    half_diag_sq += h * h;
  }
  SceneBound b;
  b.center = vox.frame.to_ambient(mid);
  b.radius = std::sqrt(half_diag_sq) + pad;
  return b;
}

}  // namespace

SceneSet product_scene(std::shared_ptr<const VoxelSet> e1,
                       std::shared_ptr<const VoxelSet> e2) {
  if (!e1 || !e2) throw std::invalid_argument("product_scene: null factor");
  for (const auto* v : {e1.get(), e2.get()}) {
    if (v->frame.local_dim() != v->frame.ambient_real_dim()) {
      throw std::invalid_argument(
          "product_scene: factors must sit on full-dimensional frames");
    }
  }
  const std::size_t n1 = e1->frame.ambient_n;
  const std::size_t n2 = e2->frame.ambient_n;
  const std::size_t m = 4 * (n1 + n2);

  SceneSet scene;
  scene.ambient_n = n1 + n2;
  auto leaf = [&](const std::shared_ptr<const VoxelSet>& vox, std::size_t off,
                  std::size_t cnt) {
    Affine to_local = frame_pullback_affine(vox->frame)
                          .compose(block_projection(m, off, cnt));
    return scene_voxel_lookup(vox, std::move(to_local));
  };
  scene.root = scene_and({leaf(e1, 0, 4 * n1), leaf(e2, 4 * n1, 4 * n2)});

  const SceneBound b1 = window_bound(*e1, 0.0);
  const SceneBound b2 = window_bound(*e2, 0.0);
  SceneBound b;
  b.center.reserve(m);
  b.center.insert(b.center.end(), b1.center.begin(), b1.center.end());
  b.center.insert(b.center.end(), b2.center.begin(), b2.center.end());
  b.radius = std::sqrt(b1.radius * b1.radius + b2.radius * b2.radius);
  scene.bound = b;
  return scene;
}

SceneSet scene_from_voxels(std::shared_ptr<const VoxelSet> vox, double slab_tau) {
  if (!vox) throw std::invalid_argument("scene_from_voxels: null voxels");
  SceneSet scene;
  scene.ambient_n = vox->frame.ambient_n;
  const bool full = vox->frame.local_dim() == vox->frame.ambient_real_dim();
  double pad = 0.0;
  if (full) {
    scene.root = scene_voxel_lookup(vox, frame_pullback_affine(vox->frame));
  } else {
    const double tau = slab_tau > 0.0 ? slab_tau : 0.75 * vox->grid.cell_diagonal();
    scene.root = scene_voxel_slab(vox, tau);
    pad = tau;
  }
  scene.bound = window_bound(*vox, pad);
  return scene;
}

}  // namespace hxconv
