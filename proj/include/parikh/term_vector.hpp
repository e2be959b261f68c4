#ifndef PARIKH_TERM_VECTOR_HPP
#define PARIKH_TERM_VECTOR_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <vector>

namespace parikh {

// Dense integer vector over an ordered terminal alphabet. Entries may be
// negative; a Parikh image is the special case with nonnegative entries.
class TermVector {
 public:
  TermVector() = default;
  explicit TermVector(std::size_t dim) : v_(dim, 0) {}
  TermVector(std::initializer_list<std::int64_t> init) : v_(init) {}
  explicit TermVector(std::vector<std::int64_t> entries) : v_(std::move(entries)) {}

  static TermVector unit(std::size_t dim, std::size_t i, std::int64_t sign = 1) {
    TermVector u(dim);
    u[i] = sign;
    return u;
  }

  std::size_t dim() const { return v_.size(); }
  std::int64_t operator[](std::size_t i) const { return v_[i]; }
  std::int64_t& operator[](std::size_t i) { return v_[i]; }
  const std::vector<std::int64_t>& entries() const { return v_; }

  bool is_zero() const {
    return std::all_of(v_.begin(), v_.end(), [](std::int64_t x) { return x == 0; });
  }
  bool is_nonnegative() const {
    return std::all_of(v_.begin(), v_.end(), [](std::int64_t x) { return x >= 0; });
  }

  std::int64_t norm1() const {
    std::int64_t s = 0;
    for (auto x : v_) s += std::llabs(x);
    return s;
  }
  std::int64_t norm_inf() const {
    std::int64_t m = 0;
    for (auto x : v_) m = std::max<std::int64_t>(m, std::llabs(x));
    return m;
  }

  TermVector& operator+=(const TermVector& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  TermVector& operator-=(const TermVector& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  TermVector& operator*=(std::int64_t k) {
    for (auto& x : v_) x *= k;
    return *this;
  }
  friend TermVector operator+(TermVector a, const TermVector& b) { return a += b; }
  friend TermVector operator-(TermVector a, const TermVector& b) { return a -= b; }
  friend TermVector operator*(TermVector a, std::int64_t k) { return a *= k; }
  friend TermVector operator*(std::int64_t k, TermVector a) { return a *= k; }
  friend TermVector operator-(TermVector a) { return a *= -1; }

  friend bool operator==(const TermVector&, const TermVector&) = default;
  friend auto operator<=>(const TermVector& a, const TermVector& b) { return a.v_ <=> b.v_; }

 private:
  std::vector<std::int64_t> v_;
};

struct TermVectorHash {
  std::size_t operator()(const TermVector& v) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < v.dim(); ++i) {
      h ^= std::hash<std::int64_t>{}(v[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace parikh

#endif  // PARIKH_TERM_VECTOR_HPP
