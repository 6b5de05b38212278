#include "uclab/torus_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uclab/fft.hpp"

namespace uclab {
namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw InvalidArgument("fields live on different grids");
}

std::vector<std::complex<double>> forward_normalized(const ScalarField& f) {
  const auto& spec = f.spec();
  std::vector<std::complex<double>> data(f.values().begin(), f.values().end());
  fft::forward(data, spec.dim(), spec.points());
  const double scale = 1.0 / static_cast<double>(spec.size());
  for (auto& c : data) c *= scale;
  return data;
}

ScalarField inverse_real(const GridSpec& spec, std::vector<std::complex<double>> data) {
  fft::inverse(data, spec.dim(), spec.points());
  std::vector<double> values(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) values[i] = data[i].real();
  return ScalarField(spec, std::move(values));
}

// Per-axis interpolation basis: points x rows, N columns.
std::vector<std::complex<double>> axis_basis(const std::vector<double>& xs, int points) {
  std::vector<std::complex<double>> basis(xs.size() * static_cast<std::size_t>(points));
  for (std::size_t p = 0; p < xs.size(); ++p) {
    const double shifted = xs[p] + 0.5;
    for (int k = 0; k < points; ++k) {
      const int s = signed_mode(k, points);
      std::complex<double> value;
      if (2 * s == points) {
        value = std::cos(kPi * points * shifted);
      } else {
        const double phase = 2.0 * kPi * s * shifted;
        value = {std::cos(phase), std::sin(phase)};
      }
      basis[p * static_cast<std::size_t>(points) + static_cast<std::size_t>(k)] = value;
    }
  }
  return basis;
}

}  // namespace

GridSpec::GridSpec(int dim, int points) : dim_(dim), points_(points), size_(1) {
  if (dim < 1 || dim > 3) throw InvalidArgument("grid dimension must be 1, 2, or 3");
  if (!is_power_of_two(points) || points < 16)
    throw InvalidArgument("points per axis must be a power of two >= 16, got " +
                          std::to_string(points));
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(points);
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dim_); }

std::array<int, 3> GridSpec::unravel(std::size_t index) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(index % static_cast<std::size_t>(points_));
    index /= static_cast<std::size_t>(points_);
  }
  return idx;
}

Point GridSpec::position(std::size_t index) const {
  const auto idx = unravel(index);
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[static_cast<std::size_t>(a)] = node(idx[static_cast<std::size_t>(a)]);
  return x;
}

ScalarField::ScalarField(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.size())
    throw InvalidArgument("field length does not match grid size");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("field contains non-finite values");
}

ScalarField ScalarField::constant(const GridSpec& spec, double c) {
  return ScalarField(spec, std::vector<double>(spec.size(), c));
}

ScalarField ScalarField::sample(const GridSpec& spec, const std::function<double(const Point&)>& f) {
  std::vector<double> values(spec.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(spec.position(i));
  return ScalarField(spec, std::move(values));
}

ScalarField ScalarField::operator+(const ScalarField& other) const {
  require_same_grid(spec_, other.spec_);
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.values_[i];
  return ScalarField(spec_, std::move(out));
}

ScalarField ScalarField::operator-(const ScalarField& other) const {
  require_same_grid(spec_, other.spec_);
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.values_[i];
  return ScalarField(spec_, std::move(out));
}

ScalarField ScalarField::operator*(const ScalarField& other) const {
  require_same_grid(spec_, other.spec_);
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= other.values_[i];
  return ScalarField(spec_, std::move(out));
}

ScalarField ScalarField::scaled(double c) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= c;
  return ScalarField(spec_, std::move(out));
}

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("vector field needs at least one component");
  const auto& spec = components_.front().spec();
  if (static_cast<int>(components_.size()) != spec.dim())
    throw InvalidArgument("vector field must have one component per dimension");
  for (const auto& c : components_) require_same_grid(spec, c.spec());
}

VectorField VectorField::zero(const GridSpec& spec) {
  return VectorField(std::vector<ScalarField>(static_cast<std::size_t>(spec.dim()),
                                              ScalarField::constant(spec, 0.0)));
}

ScalarField VectorField::squared_magnitude() const {
  std::vector<double> out(spec().size(), 0.0);
  for (const auto& c : components_)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i] * c[i];
  return ScalarField(spec(), std::move(out));
}

ScalarField VectorField::magnitude() const {
  auto sq = squared_magnitude().values();
  for (double& v : sq) v = std::sqrt(v);
  return ScalarField(spec(), std::move(sq));
}

int signed_mode(int index, int points) { return index <= points / 2 ? index : index - points; }

std::array<int, 3> signed_modes(const GridSpec& spec, std::size_t index) {
  auto idx = spec.unravel(index);
  for (int a = 0; a < spec.dim(); ++a) {
    auto& k = idx[static_cast<std::size_t>(a)];
    k = signed_mode(k, spec.points());
  }
  return idx;
}

Spectrum to_spectrum(const ScalarField& f) { return {f.spec(), forward_normalized(f)}; }

ScalarField from_spectrum(const Spectrum& s) { return inverse_real(s.spec, s.coefficients); }

Spectrum product_spectrum(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.spec(), b.spec());
  const GridSpec& spec = a.spec();
  const GridSpec fine(spec.dim(), 2 * spec.points());
  const int half = spec.points() / 2;
  const int fine_n = fine.points();

  auto pad = [&](const ScalarField& f) {
    const auto coeffs = forward_normalized(f);
    std::vector<std::complex<double>> padded(fine.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const auto k = signed_modes(spec, i);
      bool nyquist = false;
      std::size_t target = 0;
      for (int ax = 0; ax < spec.dim(); ++ax) {
        const int s = k[static_cast<std::size_t>(ax)];
        if (s == half) nyquist = true;
        target = target * static_cast<std::size_t>(fine_n) +
                 static_cast<std::size_t>((s + fine_n) % fine_n);
      }
      if (!nyquist) padded[target] = coeffs[i];
    }
    fft::inverse(padded, fine.dim(), fine_n);
    return padded;
  };

  auto pa = pad(a);
  const auto pb = pad(b);
  for (std::size_t i = 0; i < pa.size(); ++i) pa[i] = pa[i].real() * pb[i].real();
  fft::forward(pa, fine.dim(), fine_n);
  const double scale = 1.0 / static_cast<double>(fine.size());
  for (auto& c : pa) c *= scale;
  return {fine, std::move(pa)};
}

std::vector<double> interpolate_tensor(const Spectrum& s,
                                       const std::array<std::vector<double>, 3>& axes) {
  const int dim = s.spec.dim();
  const int n = s.spec.points();
  std::array<std::size_t, 3> count{1, 1, 1};
  std::array<std::size_t, 3> modes{1, 1, 1};
  std::array<std::vector<std::complex<double>>, 3> basis;
  for (int a = 0; a < 3; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    if (a < dim) {
      count[ua] = axes[ua].size();
      modes[ua] = static_cast<std::size_t>(n);
      basis[ua] = axis_basis(axes[ua], n);
    } else {
      basis[ua] = {1.0};
    }
  }

  // Contract the last axis first: c[k0][k1][k2] -> t[k0][k1][p2] -> ...
  std::vector<std::complex<double>> cur = s.coefficients;
  std::array<std::size_t, 3> shape = modes;
  for (int a = 2; a >= 0; --a) {
    const auto ua = static_cast<std::size_t>(a);
    std::array<std::size_t, 3> next_shape = shape;
    next_shape[ua] = count[ua];
    std::size_t outer = 1;
    for (int b = 0; b < a; ++b) outer *= shape[static_cast<std::size_t>(b)];
    std::size_t inner = 1;
    for (int b = a + 1; b < 3; ++b) inner *= shape[static_cast<std::size_t>(b)];
    std::vector<std::complex<double>> next(outer * count[ua] * inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t p = 0; p < count[ua]; ++p)
        for (std::size_t k = 0; k < shape[ua]; ++k) {
          const auto w = basis[ua][p * shape[ua] + k];
          const auto* src = &cur[(o * shape[ua] + k) * inner];
          auto* dst = &next[(o * count[ua] + p) * inner];
          for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
        }
    cur = std::move(next);
    shape = next_shape;
  }
  std::vector<double> out(cur.size());
  for (std::size_t i = 0; i < cur.size(); ++i) out[i] = cur[i].real();
  return out;
}

double interpolate(const Spectrum& s, const Point& x) {
  std::array<std::vector<double>, 3> axes;
  for (int a = 0; a < s.spec.dim(); ++a) axes[static_cast<std::size_t>(a)] = {x[static_cast<std::size_t>(a)]};
  return interpolate_tensor(s, axes).front();
}

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("Lebesgue exponent must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  if (p == 2.0) {
    for (double v : f.values()) sum += v * v;
    return std::sqrt(sum * f.spec().cell_volume());
  }
  for (double v : f.values()) sum += std::pow(std::abs(v), p);
  return std::pow(sum * f.spec().cell_volume(), 1.0 / p);
}

double lp_norm(const VectorField& w, double p) { return lp_norm(w.magnitude(), p); }

double l2_inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.spec(), g.spec());
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * g[i];
  return sum * f.spec().cell_volume();
}

double mean(const ScalarField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum / static_cast<double>(f.size());
}

VectorField gradient(const ScalarField& f) {
  const auto& spec = f.spec();
  const auto coeffs = forward_normalized(f);
  std::vector<ScalarField> comps;
  comps.reserve(static_cast<std::size_t>(spec.dim()));
  for (int a = 0; a < spec.dim(); ++a) {
    std::vector<std::complex<double>> d(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const int k = signed_modes(spec, i)[static_cast<std::size_t>(a)];
      if (2 * k == spec.points()) continue;  // odd derivative of the Nyquist mode
      d[i] = coeffs[i] * std::complex<double>(0.0, 2.0 * kPi * k);
    }
    comps.push_back(inverse_real(spec, std::move(d)));
  }
  return VectorField(std::move(comps));
}

ScalarField laplacian(const ScalarField& f) {
  const auto& spec = f.spec();
  auto coeffs = forward_normalized(f);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto k = signed_modes(spec, i);
    double k2 = 0.0;
    for (int a = 0; a < spec.dim(); ++a) k2 += double(k[static_cast<std::size_t>(a)]) * k[static_cast<std::size_t>(a)];
    coeffs[i] *= -4.0 * kPi * kPi * k2;
  }
  return inverse_real(spec, std::move(coeffs));
}

ScalarField divergence(const VectorField& w) {
  const auto& spec = w.spec();
  std::vector<std::complex<double>> acc(spec.size());
  for (int a = 0; a < spec.dim(); ++a) {
    const auto coeffs = forward_normalized(w[a]);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const int k = signed_modes(spec, i)[static_cast<std::size_t>(a)];
      if (2 * k == spec.points()) continue;
      acc[i] += coeffs[i] * std::complex<double>(0.0, 2.0 * kPi * k);
    }
  }
  return inverse_real(spec, std::move(acc));
}

Point periodic_displacement(const Point& x, const Point& y, int dim) {
  Point d{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    double v = x[ua] - y[ua];
    v -= std::floor(v + 0.5);
    d[ua] = v;
  }
  return d;
}

double ball_l2_norm(const ScalarField& f, const Point& x0, double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) throw InvalidArgument("ball radius must lie in (0, 1/2]");
  const auto& spec = f.spec();
  const double rim_tol = 1e-12;
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto d = periodic_displacement(spec.position(i), x0, spec.dim());
    const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (r < delta - rim_tol) {
      sum += f[i] * f[i];
    } else if (std::abs(r - delta) <= rim_tol) {
      sum += 0.5 * f[i] * f[i];
    }
  }
  return std::sqrt(sum * spec.cell_volume());
}

double dirichlet_quotient(const ScalarField& f) {
  const auto& spec = f.spec();
  const auto coeffs = forward_normalized(f);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto k = signed_modes(spec, i);
    double k2 = 0.0;
    for (int a = 0; a < spec.dim(); ++a) {
      const int ka = k[static_cast<std::size_t>(a)];
      if (2 * ka != spec.points()) k2 += double(ka) * ka;
    }
    const double c2 = std::norm(coeffs[i]);
    num += 4.0 * kPi * kPi * k2 * c2;
    den += c2;
  }
  if (!(den > 0.0)) throw InvalidArgument("Dirichlet quotient of the zero field is undefined");
  return num / den;
}

}  // namespace uclab
