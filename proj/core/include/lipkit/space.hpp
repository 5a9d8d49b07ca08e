#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lipkit/error.hpp"

namespace lipkit {

// Exponent of an l^p norm. Infinity is a distinct variant rather than a
// sentinel double, so p = inf can never collide with a finite exponent in
// comparisons or serialized form.
class PExponent {
 public:
  static PExponent finite(double p);
  static PExponent infinity();

  bool is_infinite() const noexcept { return infinite_; }

  // Finite exponent value; calling this on the infinity variant is a bug.
  double value() const;

  bool operator==(const PExponent& other) const noexcept;
  bool operator!=(const PExponent& other) const noexcept { return !(*this == other); }

 private:
  PExponent(bool infinite, double p) : infinite_(infinite), p_(p) {}

  bool infinite_;
  double p_;
};

struct NormedSpace;
struct MaxPartialSumData;
struct DirectSumData;

// Describes how a norm is evaluated. Plain (optionally weighted) l^p covers
// the coefficient and ambient spaces; the two structured kinds exist for
// dilation targets:
//   max_partial_sum  ||a|| = max_n || sum_{k<=n} a_k tau_k ||  over a fixed
//                    atom list tau in a base space,
//   direct_sum_max   max of component norms over a fixed decomposition.
class NormDescriptor {
 public:
  enum class Kind { lp, max_partial_sum, direct_sum_max };

  static NormDescriptor lp(PExponent p);
  static NormDescriptor lp_weighted(PExponent p, std::vector<double> weights);
  // Atoms are coordinate rows in `base`; a zero atom makes the would-be norm
  // degenerate and is rejected, naming the witness index.
  static NormDescriptor max_partial_sum(NormedSpace base,
                                        std::vector<std::vector<double>> atoms);
  static NormDescriptor direct_sum_max(std::vector<NormedSpace> parts);

  Kind kind() const noexcept { return kind_; }
  const PExponent& exponent() const;
  const std::optional<std::vector<double>>& weights() const;
  const MaxPartialSumData& partial_sum_data() const;
  const DirectSumData& direct_sum_data() const;

  bool operator==(const NormDescriptor& other) const;
  bool operator!=(const NormDescriptor& other) const { return !(*this == other); }

 private:
  NormDescriptor(Kind kind, PExponent p) : kind_(kind), p_(p) {}

  Kind kind_;
  PExponent p_;
  std::optional<std::vector<double>> weights_;
  std::shared_ptr<const MaxPartialSumData> partial_sum_;
  std::shared_ptr<const DirectSumData> direct_sum_;
};

// A finite-dimensional normed space: dimension plus norm descriptor.
// Value type; equality means "same dimension, same norm".
struct NormedSpace {
  int dim = 0;
  NormDescriptor norm = NormDescriptor::lp(PExponent::finite(2.0));

  bool operator==(const NormedSpace& other) const {
    return dim == other.dim && norm == other.norm;
  }
  bool operator!=(const NormedSpace& other) const { return !(*this == other); }
};

struct MaxPartialSumData {
  NormedSpace base;
  std::vector<std::vector<double>> atoms;  // atoms[n] has base.dim entries
};

struct DirectSumData {
  std::vector<NormedSpace> parts;  // dims sum to the ambient dimension
};

// A point of a NormedSpace. Treated as immutable once built; all library
// operations return fresh vectors.
struct Vector {
  NormedSpace space;
  std::vector<double> coords;
};

NormedSpace lp_space(int dim, PExponent p);
NormedSpace l2_space(int dim);
// One-dimensional space used as the codomain of scalar functionals.
NormedSpace scalar_space();

Vector make_vector(NormedSpace space, std::vector<double> coords);
Vector zero_vector(NormedSpace space);

double norm(const NormedSpace& space, const Vector& v);
// Same norm on raw coordinates; `coords` must have space.dim entries.
double norm_of(const NormedSpace& space, const std::vector<double>& coords);
double distance(const NormedSpace& space, const Vector& x, const Vector& y);

// Embeds a coefficient list into `space`, zero-padding up to space.dim.
// A list longer than the dimension is a structural error.
Vector seq_embed(const NormedSpace& space, const std::vector<double>& coeffs);

Vector add(const Vector& x, const Vector& y);
Vector sub(const Vector& x, const Vector& y);
Vector scale(double factor, const Vector& x);

}  // namespace lipkit
