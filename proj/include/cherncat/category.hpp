#pragma once

#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "cherncat/linalg.hpp"

namespace cherncat {

/// The finite set of simple labels indexing every per-simple family,
/// with optional quantum dimensions carried as metadata.
struct CategoryContext {
  std::vector<std::string> simples;
  std::vector<double> quantum_dims;  // empty, or aligned with simples, all > 0

  std::size_t size() const { return simples.size(); }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < simples.size(); ++i)
      if (simples[i] == label) return i;
    throw DomainError("unknown simple label: " + label);
  }

  void validate() const {
    if (simples.empty()) throw DomainError("category: no simple objects");
    std::unordered_set<std::string> seen;
    for (const auto& s : simples)
      if (!seen.insert(s).second) throw DomainError("category: duplicate simple label: " + s);
    if (!quantum_dims.empty()) {
      if (quantum_dims.size() != simples.size())
        throw DomainError("category: quantum_dims misaligned with simples");
      for (double d : quantum_dims)
        if (!(d > 0.0)) throw DomainError("category: quantum dimension must be positive");
    }
  }
};

using CategoryPtr = std::shared_ptr<const CategoryContext>;

inline bool same_context(const CategoryPtr& a, const CategoryPtr& b) {
  return a == b || (a && b && a->simples == b->simples);
}

/// An object of Hilb(X) at desk scale: one fiber dimension per simple.
struct HilbObject {
  CategoryPtr ctx;
  std::vector<Eigen::Index> dims;  // one nonnegative entry per simple

  void validate() const {
    if (!ctx) throw DomainError("object: missing category context");
    ctx->validate();
    if (dims.size() != ctx->size()) throw DomainError("object: one dimension per simple required");
    for (Eigen::Index d : dims)
      if (d < 0) throw DomainError("object: negative fiber dimension");
  }
};

inline bool same_object(const HilbObject& a, const HilbObject& b) {
  return same_context(a.ctx, b.ctx) && a.dims == b.dims;
}

/// A morphism of Hilb(X): a matrix per simple, target-dim x source-dim.
struct CatMorphism {
  HilbObject source;
  HilbObject target;
  std::vector<Mat> blocks;

  void validate() const {
    source.validate();
    target.validate();
    if (!same_context(source.ctx, target.ctx)) throw ShapeError("morphism: mixed contexts");
    if (blocks.size() != source.dims.size()) throw ShapeError("morphism: one block per simple required");
    for (std::size_t c = 0; c < blocks.size(); ++c) {
      if (blocks[c].rows() != target.dims[c] || blocks[c].cols() != source.dims[c])
        throw ShapeError("morphism: block shape mismatch at simple " + source.ctx->simples[c]);
      require_finite(blocks[c], "morphism block");
    }
  }
};

inline CatMorphism identity_morphism(const HilbObject& h) {
  CatMorphism f{h, h, {}};
  f.blocks.reserve(h.dims.size());
  for (Eigen::Index d : h.dims) f.blocks.push_back(Mat::Identity(d, d));
  return f;
}

inline CatMorphism zero_morphism(const HilbObject& source, const HilbObject& target) {
  CatMorphism f{source, target, {}};
  f.blocks.reserve(source.dims.size());
  for (std::size_t c = 0; c < source.dims.size(); ++c)
    f.blocks.push_back(Mat::Zero(target.dims[c], source.dims[c]));
  return f;
}

inline CatMorphism compose(const CatMorphism& g, const CatMorphism& f) {
  if (!same_object(f.target, g.source)) throw ShapeError("compose: target/source mismatch");
  CatMorphism out{f.source, g.target, {}};
  out.blocks.reserve(f.blocks.size());
  for (std::size_t c = 0; c < f.blocks.size(); ++c) out.blocks.push_back(g.blocks[c] * f.blocks[c]);
  return out;
}

inline CatMorphism adjoint(const CatMorphism& f) {
  CatMorphism out{f.target, f.source, {}};
  out.blocks.reserve(f.blocks.size());
  for (const Mat& b : f.blocks) out.blocks.push_back(b.adjoint());
  return out;
}

inline CatMorphism add(const CatMorphism& f, const CatMorphism& g) {
  if (!same_object(f.source, g.source) || !same_object(f.target, g.target))
    throw ShapeError("add: object mismatch");
  CatMorphism out = f;
  for (std::size_t c = 0; c < out.blocks.size(); ++c) out.blocks[c] += g.blocks[c];
  return out;
}

inline CatMorphism scale(const Cplx& s, const CatMorphism& f) {
  CatMorphism out = f;
  for (Mat& b : out.blocks) b *= s;
  return out;
}

/// sup over simples of the per-block operator norm; 0 on all-empty objects.
inline double sup_operator_norm(const CatMorphism& f) {
  double out = 0.0;
  for (const Mat& b : f.blocks) out = std::max(out, operator_norm(b));
  return out;
}

/// sup over simples of the per-block Schatten p-norm.
inline double sup_schatten_norm(const CatMorphism& f, double p) {
  if (!(p >= 1.0)) throw DomainError("sup_schatten_norm: p must be >= 1");
  double out = 0.0;
  for (const Mat& b : f.blocks) out = std::max(out, schatten_norm(b, p));
  return out;
}

}  // namespace cherncat
