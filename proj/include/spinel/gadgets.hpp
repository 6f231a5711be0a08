#pragma once

// Closed-form elimination gadgets: multilinear forms of -|P| for the block
// shapes that come up most often. Each kind has a fixed arity (number of
// target spins) and a fixed coefficient-slot layout:
//
//   TwoSpin       P = b s1 + c s2                          slots (b, c)
//   TwoSpinField  P = a + b s1 + c s2                      slots (a, b, c)
//   ThreeSpin     P = b s1 + c s2 + d s3                   slots (b, c, d)
//   Triplet       P = a s1 s2 + b s1 + c s2                slots (a, b, c)
//   TwoBody       P = a s1 s2 + b s1 s3 + c s2 + d s3      slots (a, b, c, d)
//   ThreeBody     P = a s1 s2 s3 + b s1 s2 s4 + c s3 + d s4 slots (a, b, c, d)
//
// where s1, s2, ... are the targets in the order given.

#include <array>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "spinel/error.hpp"
#include "spinel/poly.hpp"

namespace spinel {

enum class GadgetKind { TwoSpin, TwoSpinField, ThreeSpin, Triplet, TwoBody, ThreeBody };

inline constexpr std::array<GadgetKind, 6> kAllGadgetKinds = {
    GadgetKind::TwoSpin, GadgetKind::TwoSpinField, GadgetKind::ThreeSpin,
    GadgetKind::Triplet, GadgetKind::TwoBody,      GadgetKind::ThreeBody};

inline std::string_view gadget_name(GadgetKind kind) {
  switch (kind) {
    case GadgetKind::TwoSpin: return "TwoSpin";
    case GadgetKind::TwoSpinField: return "TwoSpinField";
    case GadgetKind::ThreeSpin: return "ThreeSpin";
    case GadgetKind::Triplet: return "Triplet";
    case GadgetKind::TwoBody: return "TwoBody";
    case GadgetKind::ThreeBody: return "ThreeBody";
  }
  return "?";
}

// Slot layout: for each coefficient slot, the target positions (0-based) of
// the monomial it multiplies.
struct GadgetLayout {
  std::size_t arity;
  std::vector<std::vector<std::size_t>> slots;
};

inline const GadgetLayout& gadget_layout(GadgetKind kind) {
  static const GadgetLayout two_spin{2, {{0}, {1}}};
  static const GadgetLayout two_spin_field{2, {{}, {0}, {1}}};
  static const GadgetLayout three_spin{3, {{0}, {1}, {2}}};
  static const GadgetLayout triplet{2, {{0, 1}, {0}, {1}}};
  static const GadgetLayout two_body{3, {{0, 1}, {0, 2}, {1}, {2}}};
  static const GadgetLayout three_body{4, {{0, 1, 2}, {0, 1, 3}, {2}, {3}}};
  switch (kind) {
    case GadgetKind::TwoSpin: return two_spin;
    case GadgetKind::TwoSpinField: return two_spin_field;
    case GadgetKind::ThreeSpin: return three_spin;
    case GadgetKind::Triplet: return triplet;
    case GadgetKind::TwoBody: return two_body;
    case GadgetKind::ThreeBody: return three_body;
  }
  return two_spin;
}

namespace detail {

inline void check_gadget_args(GadgetKind kind, std::span<const Rational> coeffs, std::span<const SpinIndex> targets) {
  const auto& layout = gadget_layout(kind);
  if (coeffs.size() != layout.slots.size()) {
    throw Error(std::string(gadget_name(kind)) + " takes " + std::to_string(layout.slots.size()) +
                " coefficients, got " + std::to_string(coeffs.size()));
  }
  if (targets.size() != layout.arity) {
    throw Error(std::string(gadget_name(kind)) + " takes " + std::to_string(layout.arity) + " targets, got " +
                std::to_string(targets.size()));
  }
  std::set<SpinIndex> distinct(targets.begin(), targets.end());
  if (distinct.size() != targets.size()) throw Error("gadget targets must be distinct");
  if (distinct.count(0)) throw Error("spin indices are 1-based");
}

inline Rational abs_q(const Rational& x) { return x < 0 ? Rational(-x) : x; }

// h[i] = |lead + sum_k sigma_k * rest[k]| / 4, where bit (n-1-k) of i set
// means sigma_k = +1 (so the first entry of rest is the most significant bit).
inline std::vector<Rational> binary_slots(const Rational& lead, std::span<const Rational> rest) {
  const std::size_t n = rest.size();
  std::vector<Rational> h(std::size_t{1} << n);
  for (std::size_t i = 0; i < h.size(); ++i) {
    Rational v = lead;
    for (std::size_t k = 0; k < n; ++k) {
      if (i >> (n - 1 - k) & 1) v += rest[k];
      else v -= rest[k];
    }
    h[i] = abs_q(v) / 4;
  }
  return h;
}

}  // namespace detail

// The block polynomial P that a gadget kind eliminates, with the given slots.
inline Polynomial gadget_block(GadgetKind kind, std::span<const Rational> coeffs, std::span<const SpinIndex> targets) {
  detail::check_gadget_args(kind, coeffs, targets);
  const auto& layout = gadget_layout(kind);
  Polynomial p;
  p.declare_all(targets);
  for (std::size_t s = 0; s < layout.slots.size(); ++s) {
    std::vector<SpinIndex> idx;
    for (std::size_t pos : layout.slots[s]) idx.push_back(targets[pos]);
    p.add_term(Monomial::canonical(std::move(idx)), coeffs[s]);
  }
  return p;
}

// Multilinear form of -|P| for P = gadget_block(kind, coeffs, targets).
inline Polynomial apply_gadget(GadgetKind kind, std::span<const Rational> raw, std::span<const SpinIndex> targets) {
  detail::check_gadget_args(kind, raw, targets);
  // |P| = |-P|: normalize so the leading slot is non-negative.
  std::vector<Rational> c(raw.begin(), raw.end());
  if (c[0] < 0) {
    for (auto& x : c) x = -x;
  }
  Polynomial out;
  out.declare_all(targets);
  auto put = [&](std::initializer_list<std::size_t> positions, const Rational& v) {
    std::vector<SpinIndex> idx;
    for (std::size_t pos : positions) idx.push_back(targets[pos]);
    out.add_term(Monomial::canonical(std::move(idx)), v);
  };

  switch (kind) {
    case GadgetKind::TwoSpin: {
      Rational plus = detail::abs_q(c[0] + c[1]);
      Rational minus = detail::abs_q(c[0] - c[1]);
      put({}, -(plus + minus) / 2);
      put({0, 1}, -(plus - minus) / 2);
      break;
    }
    case GadgetKind::TwoSpinField: {
      std::array<Rational, 2> rest{c[1], c[2]};
      auto h = detail::binary_slots(c[0], rest);
      put({}, -(h[0] + h[1] + h[2] + h[3]));
      put({0, 1}, -h[0] + h[1] + h[2] - h[3]);
      put({0}, h[0] + h[1] - h[2] - h[3]);
      put({1}, h[0] - h[1] + h[2] - h[3]);
      break;
    }
    case GadgetKind::ThreeSpin: {
      std::array<Rational, 2> rest{c[1], c[2]};
      auto g = detail::binary_slots(c[0], rest);
      put({}, -(g[0] + g[1] + g[2] + g[3]));
      put({0, 1}, g[0] + g[1] - g[2] - g[3]);
      put({0, 2}, g[0] - g[1] + g[2] - g[3]);
      put({1, 2}, -g[0] + g[1] + g[2] - g[3]);
      break;
    }
    case GadgetKind::Triplet: {
      std::array<Rational, 2> rest{c[1], c[2]};
      auto h = detail::binary_slots(c[0], rest);
      put({}, -(h[0] + h[1] + h[2] + h[3]));
      put({0}, h[0] - h[1] + h[2] - h[3]);
      put({1}, h[0] + h[1] - h[2] - h[3]);
      put({0, 1}, -h[0] + h[1] + h[2] - h[3]);
      break;
    }
    case GadgetKind::TwoBody:
    case GadgetKind::ThreeBody: {
      std::array<Rational, 3> rest{c[1], c[2], c[3]};
      auto h = detail::binary_slots(c[0], rest);
      Rational A = -h[2] - h[4] - h[7] - h[1];
      Rational alpha = -h[2] + h[4] - h[7] + h[1];
      Rational beta = h[2] - h[4] - h[7] + h[1];
      Rational gamma = h[2] + h[4] - h[7] - h[1];
      put({}, A);
      if (kind == GadgetKind::TwoBody) {
        put({0}, alpha);
        put({1, 2}, beta);
        put({0, 1, 2}, gamma);
      } else {
        put({0, 1}, alpha);
        put({2, 3}, beta);
        put({0, 1, 2, 3}, gamma);
      }
      break;
    }
  }
  return out;
}

inline Polynomial apply_gadget(GadgetKind kind, std::initializer_list<Rational> coeffs,
                               std::initializer_list<SpinIndex> targets) {
  return apply_gadget(kind, std::span<const Rational>(coeffs.begin(), coeffs.size()),
                      std::span<const SpinIndex>(targets.begin(), targets.size()));
}

}  // namespace spinel
