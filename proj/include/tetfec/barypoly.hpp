#ifndef TETFEC_BARYPOLY_HPP
#define TETFEC_BARYPOLY_HPP

/// Exact scalar polynomials on a d-simplex, stored as homogeneous degree-k
/// forms in the d+1 barycentric variables.  The homogeneous representation of
/// a polynomial of degree <= k is unique, restriction to a sub-simplex just
/// drops monomials, and monomial integrals have a closed rational form.

#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tetfec/rat.hpp"

namespace tetfec {

/// Exponent multi-index over lambda_0..lambda_d; entries past d are zero.
using MI = std::array<int, 4>;

inline Int choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

inline long mono_count(int dim, int deg) {
  return static_cast<long>(choose(deg + dim, dim));
}

struct MonoTable {
  std::vector<MI> list;
  std::map<MI, int> rank;
};

/// Monomials of total degree deg in dim+1 variables, first exponent
/// descending; cached per (dim, deg).
inline const MonoTable& mono_table(int dim, int deg) {
  static std::map<std::pair<int, int>, MonoTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, deg);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  MonoTable t;
  MI a{0, 0, 0, 0};
  // Recursive enumeration with leading exponents descending.
  auto emit = [&](auto&& self, int var, int rem) -> void {
    if (var == dim) {
      a[var] = rem;
      t.rank[a] = static_cast<int>(t.list.size());
      t.list.push_back(a);
      return;
    }
    for (int e = rem; e >= 0; --e) {
      a[var] = e;
      self(self, var + 1, rem - e);
    }
    a[var] = 0;
  };
  emit(emit, 0, deg);
  return cache.emplace(key, std::move(t)).first->second;
}

struct BaryPoly {
  int dim = 3;
  int degree = 0;
  std::vector<Rat> c;  // dense over mono_table(dim, degree).list

  BaryPoly() : c(1, Rat(0)) {}
  BaryPoly(int d, int k) : dim(d), degree(k), c(mono_count(d, k), Rat(0)) {}

  static BaryPoly zero(int d, int k = 0) { return BaryPoly(d, k); }

  static BaryPoly constant(int d, const Rat& v) {
    BaryPoly p(d, 0);
    p.c[0] = v;
    return p;
  }

  static BaryPoly lambda(int d, int i) {
    if (i < 0 || i > d) throw std::invalid_argument("lambda: index out of range");
    BaryPoly p(d, 1);
    MI a{0, 0, 0, 0};
    a[i] = 1;
    p.c[mono_table(d, 1).rank.at(a)] = 1;
    return p;
  }

  const Rat& coeff(const MI& a) const { return c[mono_table(dim, degree).rank.at(a)]; }
  Rat& coeff(const MI& a) { return c[mono_table(dim, degree).rank.at(a)]; }

  bool is_zero() const {
    for (const auto& v : c)
      if (v != 0) return false;
    return true;
  }

  /// Same polynomial as a homogeneous form of higher degree k2
  /// (multiplication by powers of sum(lambda) = 1).
  BaryPoly raised_to(int k2) const {
    if (k2 < degree) throw std::invalid_argument("raised_to: degree can only grow");
    BaryPoly p = *this;
    while (p.degree < k2) {
      BaryPoly q(p.dim, p.degree + 1);
      const MonoTable& src = mono_table(p.dim, p.degree);
      const MonoTable& dst = mono_table(p.dim, p.degree + 1);
      for (std::size_t m = 0; m < src.list.size(); ++m) {
        if (p.c[m] == 0) continue;
        MI a = src.list[m];
        for (int i = 0; i <= p.dim; ++i) {
          ++a[i];
          q.c[dst.rank.at(a)] += p.c[m];
          --a[i];
        }
      }
      p = std::move(q);
    }
    return p;
  }

  /// Inverse of raised_to: succeeds iff the polynomial has degree <= k2.
  std::optional<BaryPoly> lowered_to(int k2) const {
    if (k2 > degree) throw std::invalid_argument("lowered_to: degree can only shrink");
    BaryPoly p = *this;
    while (p.degree > k2) {
      const MonoTable& src = mono_table(p.dim, p.degree);
      const MonoTable& dst = mono_table(p.dim, p.degree - 1);
      BaryPoly q(p.dim, p.degree - 1);
      // Solve (sum lambda) q = p: coefficients with gamma_0 descending are
      // determined one by one; the alpha_0 = 0 equations must then check out.
      for (int g0 = p.degree - 1; g0 >= 0; --g0) {
        for (std::size_t m = 0; m < dst.list.size(); ++m) {
          MI g = dst.list[m];
          if (g[0] != g0) continue;
          MI a = g;
          ++a[0];  // a = gamma + e0
          Rat v = p.c[src.rank.at(a)];
          for (int i = 1; i <= p.dim; ++i) {
            if (a[i] == 0) continue;
            --a[i];
            v -= q.c[dst.rank.at(a)];
            ++a[i];
          }
          q.c[m] = v;
        }
      }
      for (std::size_t m = 0; m < src.list.size(); ++m) {
        MI a = src.list[m];
        if (a[0] != 0) continue;
        Rat v(0);
        for (int i = 1; i <= p.dim; ++i) {
          if (a[i] == 0) continue;
          --a[i];
          v += q.c[dst.rank.at(a)];
          ++a[i];
        }
        if (v != p.c[m]) return std::nullopt;
      }
      p = std::move(q);
    }
    return p;
  }

  BaryPoly operator+(const BaryPoly& o) const {
    if (dim != o.dim) throw std::invalid_argument("add: dim mismatch");
    int k = std::max(degree, o.degree);
    BaryPoly a = raised_to(k), b = o.raised_to(k);
    for (std::size_t i = 0; i < a.c.size(); ++i) a.c[i] += b.c[i];
    return a;
  }

  BaryPoly operator-() const {
    BaryPoly p = *this;
    for (auto& v : p.c) v = -v;
    return p;
  }

  BaryPoly operator-(const BaryPoly& o) const { return *this + (-o); }

  BaryPoly operator*(const Rat& s) const {
    BaryPoly p = *this;
    for (auto& v : p.c) v *= s;
    return p;
  }

  BaryPoly operator*(const BaryPoly& o) const {
    if (dim != o.dim) throw std::invalid_argument("mul: dim mismatch");
    BaryPoly r(dim, degree + o.degree);
    const MonoTable& ta = mono_table(dim, degree);
    const MonoTable& tb = mono_table(dim, o.degree);
    const MonoTable& tr = mono_table(dim, degree + o.degree);
    for (std::size_t m = 0; m < ta.list.size(); ++m) {
      if (c[m] == 0) continue;
      for (std::size_t n = 0; n < tb.list.size(); ++n) {
        if (o.c[n] == 0) continue;
        MI s;
        for (int i = 0; i < 4; ++i) s[i] = ta.list[m][i] + tb.list[n][i];
        r.c[tr.rank.at(s)] += c[m] * o.c[n];
      }
    }
    return r;
  }

  bool equals(const BaryPoly& o) const {
    if (dim != o.dim) return false;
    int k = std::max(degree, o.degree);
    return (raised_to(k) - o.raised_to(k)).is_zero();
  }

  /// Formal partial derivative with respect to lambda_i.
  BaryPoly dlam(int i) const {
    if (degree == 0) return zero(dim);
    BaryPoly r(dim, degree - 1);
    const MonoTable& src = mono_table(dim, degree);
    const MonoTable& dst = mono_table(dim, degree - 1);
    for (std::size_t m = 0; m < src.list.size(); ++m) {
      if (c[m] == 0 || src.list[m][i] == 0) continue;
      MI a = src.list[m];
      --a[i];
      r.c[dst.rank.at(a)] += c[m] * src.list[m][i];
    }
    return r;
  }

  /// Exact value at a barycentric point (coordinates must sum to 1).
  Rat eval(const std::vector<Rat>& pt) const {
    if (static_cast<int>(pt.size()) != dim + 1)
      throw std::invalid_argument("eval: coordinate count mismatch");
    Rat s(0);
    for (const auto& v : pt) s += v;
    if (s != 1) throw std::invalid_argument("eval: coordinates must sum to 1");
    const MonoTable& t = mono_table(dim, degree);
    Rat acc(0);
    for (std::size_t m = 0; m < t.list.size(); ++m) {
      if (c[m] == 0) continue;
      Rat term = c[m];
      for (int i = 0; i <= dim; ++i)
        for (int e = 0; e < t.list[m][i]; ++e) term *= pt[i];
      acc += term;
    }
    return acc;
  }

  /// Integral over the simplex with measure normalized to 1:
  /// int lambda^alpha = alpha! d! / (|alpha| + d)!.
  Rat integral_normalized() const {
    const MonoTable& t = mono_table(dim, degree);
    Int dfact = 1;
    for (int i = 2; i <= dim; ++i) dfact *= i;
    Int denom = 1;
    for (int i = 2; i <= degree + dim; ++i) denom *= i;
    Rat acc(0);
    for (std::size_t m = 0; m < t.list.size(); ++m) {
      if (c[m] == 0) continue;
      Int afact = 1;
      for (int i = 0; i <= dim; ++i)
        for (int e = 2; e <= t.list[m][i]; ++e) afact *= e;
      acc += c[m] * Rat(afact * dfact) / Rat(denom);
    }
    return acc;
  }

  /// Restriction to the sub-simplex whose a-th barycentric variable is the
  /// host variable host_vars[a]; host variables not listed are set to zero.
  BaryPoly restricted(const std::vector<int>& host_vars) const {
    int d2 = static_cast<int>(host_vars.size()) - 1;
    BaryPoly r(d2, degree);
    const MonoTable& src = mono_table(dim, degree);
    const MonoTable& dst = mono_table(d2, degree);
    std::array<int, 4> pos;  // host var -> sub var, or -1
    pos.fill(-1);
    for (std::size_t a = 0; a < host_vars.size(); ++a) pos[host_vars[a]] = static_cast<int>(a);
    for (std::size_t m = 0; m < src.list.size(); ++m) {
      if (c[m] == 0) continue;
      MI a = src.list[m];
      MI b{0, 0, 0, 0};
      bool keep = true;
      for (int i = 0; i <= dim && keep; ++i) {
        if (a[i] == 0) continue;
        if (pos[i] < 0)
          keep = false;
        else
          b[pos[i]] = a[i];
      }
      if (keep) r.c[dst.rank.at(b)] += c[m];
    }
    return r;
  }
};

inline BaryPoly operator*(const Rat& s, const BaryPoly& p) { return p * s; }

/// Inverse of restricted(): embed a sub-simplex polynomial into a host of
/// dimension host_dim, sending sub variable a to host variable host_vars[a].
/// The result uses only the host variables listed (the natural barycentric
/// extension by zero exponents elsewhere).
inline BaryPoly embed_poly(const BaryPoly& p, const std::vector<int>& host_vars, int host_dim) {
  if (static_cast<int>(host_vars.size()) != p.dim + 1)
    throw std::invalid_argument("embed_poly: host_vars size must match sub dimension");
  BaryPoly out(host_dim, p.degree);
  const MonoTable& src = mono_table(p.dim, p.degree);
  const MonoTable& dst = mono_table(host_dim, p.degree);
  for (std::size_t m = 0; m < src.list.size(); ++m) {
    if (p.c[m] == 0) continue;
    MI a = src.list[m];
    MI b{0, 0, 0, 0};
    for (int i = 0; i <= p.dim; ++i) b[host_vars[i]] = a[i];
    out.c[dst.rank.at(b)] += p.c[m];
  }
  return out;
}

}  // namespace tetfec

#endif
