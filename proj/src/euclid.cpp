#include "cocycle_lab/euclid.hpp"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/random.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace cocycle_lab {

double GridSignal::norm(double p) const {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_parameter, "signal norm needs p >= 1");
  if (samples.empty()) return 0.0;
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& x : samples) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (const cplx& x : samples) s += std::pow(std::abs(x), p);
  return std::pow(s / static_cast<double>(samples.size()), 1.0 / p);
}

bool is_power_of_two(std::size_t n) { return n >= 1 && std::has_single_bit(n); }

void require_power_of_two(std::size_t n) {
  if (!is_power_of_two(n)) throw Error(ErrorKind::invalid_parameter, "grid length " + std::to_string(n) + " is not a power of two");
}

long long signed_frequency(std::size_t k, std::size_t n) {
  const auto kk = static_cast<long long>(k), nn = static_cast<long long>(n);
  return 2 * kk > nn ? kk - nn : kk;
}

struct Fft::Impl {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

Fft::Fft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  require_power_of_two(n);
  impl_->buf = fftw_alloc_complex(n);
  if (!impl_->buf) throw Error(ErrorKind::resource_limit, "FFT buffer allocation failed");
  const int len = static_cast<int>(n);
  impl_->fwd = fftw_plan_dft_1d(len, impl_->buf, impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_1d(len, impl_->buf, impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
  if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
  if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
  if (impl_->buf) fftw_free(impl_->buf);
}

std::vector<cplx> Fft::forward(const std::vector<cplx>& x) {
  if (x.size() != n_) throw Error(ErrorKind::invalid_parameter, "FFT input length mismatch");
  std::memcpy(impl_->buf, reinterpret_cast<const double*>(x.data()), n_ * sizeof(fftw_complex));
  fftw_execute(impl_->fwd);
  std::vector<cplx> out(n_);
  std::memcpy(reinterpret_cast<double*>(out.data()), impl_->buf, n_ * sizeof(fftw_complex));
  return out;
}

std::vector<cplx> Fft::inverse(const std::vector<cplx>& x) {
  if (x.size() != n_) throw Error(ErrorKind::invalid_parameter, "FFT input length mismatch");
  std::memcpy(impl_->buf, reinterpret_cast<const double*>(x.data()), n_ * sizeof(fftw_complex));
  fftw_execute(impl_->bwd);
  std::vector<cplx> out(n_);
  std::memcpy(reinterpret_cast<double*>(out.data()), impl_->buf, n_ * sizeof(fftw_complex));
  const double inv = 1.0 / static_cast<double>(n_);
  for (cplx& v : out) v *= inv;
  return out;
}

FrequencySymbol donut_symbol(double alpha, double beta, double gamma, std::string* warning) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error(ErrorKind::invalid_parameter, "donut symbol needs alpha, beta > 0");
  if (warning) {
    warning->clear();
    if (!(gamma > 0.0 && gamma < 1.0)) *warning = "gamma = " + std::to_string(gamma) + " lies outside (0, 1)";
    else if (!(gamma < 0.5)) *warning = "gamma = " + std::to_string(gamma) + " lies outside (0, 1/2)";
  }
  return [alpha, beta, gamma](double xi) -> cplx {
    const double a = std::sin(alpha * xi), b = std::sin(beta * xi);
    const double base = a * a + b * b;
    return base == 0.0 ? (gamma > 0.0 ? 0.0 : 1.0) : std::pow(base, gamma);
  };
}

namespace {

double resolve_scale(double scale, std::size_t n) { return scale > 0.0 ? scale : 1.0 / static_cast<double>(n); }

std::vector<cplx> symbol_table(const FrequencySymbol& symbol, std::size_t n, double scale) {
  std::vector<cplx> t(n);
  const double s = resolve_scale(scale, n);
  for (std::size_t k = 0; k < n; ++k) t[k] = symbol(static_cast<double>(signed_frequency(k, n)) * s);
  return t;
}

GridSignal apply_table(const std::vector<cplx>& table, const std::vector<cplx>& spectrum, Fft& fft) {
  std::vector<cplx> y(spectrum.size());
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = table[k] * spectrum[k];
  return GridSignal{fft.inverse(y)};
}

}  // namespace

GridSignal fft_apply(const FrequencySymbol& symbol, const GridSignal& signal, Fft& fft, double scale) {
  if (signal.size() != fft.size()) throw Error(ErrorKind::invalid_parameter, "signal length differs from the FFT length");
  return apply_table(symbol_table(symbol, signal.size(), scale), fft.forward(signal.samples), fft);
}

GridSignal fft_apply(const FrequencySymbol& symbol, const GridSignal& signal, double scale) {
  Fft fft(signal.size());
  return fft_apply(symbol, signal, fft, scale);
}

double grid_supremum(const FrequencySymbol& symbol, std::size_t n, double scale) {
  require_power_of_two(n);
  double m = 0.0;
  for (const cplx& v : symbol_table(symbol, n, scale)) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Ascent over DFT coefficients X; the signal is ifft(X).
double ascend(const std::vector<cplx>& table, std::vector<cplx> spectrum, double p, int steps, Rng& rng, Fft& fft) {
  const std::size_t n = table.size();
  auto ratio = [&](const std::vector<cplx>& x) {
    const double den = GridSignal{fft.inverse(x)}.norm(p);
    return den > 0.0 ? apply_table(table, x, fft).norm(p) / den : 0.0;
  };
  auto l2 = [](const std::vector<cplx>& x) {
    double s = 0.0;
    for (const cplx& v : x) s += std::norm(v);
    return std::sqrt(s);
  };
  double nrm = l2(spectrum);
  for (cplx& v : spectrum) v /= nrm;
  double best = ratio(spectrum);
  double sigma = 1.0 / std::sqrt(static_cast<double>(n));
  for (int s = 0; s < steps; ++s) {
    std::vector<cplx> cand = spectrum;
    cand[rng.index(n)] += sigma * rng.complex_normal();
    nrm = l2(cand);
    if (nrm == 0.0) continue;
    for (cplx& v : cand) v /= nrm;
    const double r = ratio(cand);
    if (r > best) {
      best = r;
      spectrum = std::move(cand);
      sigma = std::min(sigma * 1.5, 2.0);
    } else {
      sigma = std::max(sigma * 0.7, 1e-6);
    }
  }
  return best;
}

double sweep_one(const FrequencySymbol& symbol, double p, std::size_t n, int trials, int steps, std::uint64_t seed,
                 double scale) {
  Fft fft(n);
  const std::vector<cplx> table = symbol_table(symbol, n, scale);
  std::size_t arg = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(table[k]) > std::abs(table[arg])) arg = k;

  double best = 0.0;
  {
    Rng rng(derive_seed(seed, "sweep-peak", n));
    std::vector<cplx> spec(n, 0.0);
    spec[arg] = 1.0;
    best = std::max(best, ascend(table, spec, p, steps, rng, fft));
  }
  {
    Rng rng(derive_seed(seed, "sweep-delta", n));
    std::vector<cplx> spec(n, 1.0);
    best = std::max(best, ascend(table, spec, p, steps, rng, fft));
  }
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, "sweep-random-" + std::to_string(n), static_cast<std::uint64_t>(t)));
    std::vector<cplx> spec(n);
    for (cplx& v : spec) v = rng.complex_normal();
    best = std::max(best, ascend(table, spec, p, steps, rng, fft));
  }
  return best;
}

}  // namespace

std::vector<SweepRow> empirical_norm_sweep(const FrequencySymbol& symbol, double p, const std::vector<std::size_t>& sizes,
                                           int trials, int steps, std::uint64_t seed, double scale) {
  if (!(p >= 1.0)) throw Error(ErrorKind::invalid_parameter, "norm sweep needs p >= 1");
  if (trials < 0 || steps < 0) throw Error(ErrorKind::invalid_parameter, "trials and steps must be >= 0");
  std::vector<SweepRow> rows;
  for (std::size_t n : sizes) {
    require_power_of_two(n);
    SweepRow r;
    r.n = n;
    r.p = p;
    r.trials = trials;
    r.exact_l2 = grid_supremum(symbol, n, scale);
    r.lower_bound = sweep_one(symbol, p, n, trials, steps, seed, scale);
    rows.push_back(r);
  }
  return rows;
}

RestrictionComparison restriction_compare(const FrequencySymbol& symbol, double h, double p, std::size_t n, int trials,
                                          int steps, std::uint64_t seed) {
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_parameter, "lattice step must be positive");
  RestrictionComparison out;
  out.coarse = empirical_norm_sweep(symbol, p, {n}, trials, steps, seed, h).front().lower_bound;
  out.fine = empirical_norm_sweep(symbol, p, {n}, trials, steps, seed, 0.5 * h).front().lower_bound;
  out.drift = std::abs(out.coarse - out.fine);
  const double m = std::max(out.coarse, out.fine);
  out.relative_drift = m > 0.0 ? out.drift / m : 0.0;
  return out;
}

namespace {

void put_le(std::ostream& os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_signal_binary(const std::string& path, const GridSignal& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::io, "cannot write " + path);
  for (const cplx& v : s.samples) {
    put_le(os, v.real());
    put_le(os, v.imag());
  }
  if (!os) throw Error(ErrorKind::io, "write failed for " + path);
}

GridSignal read_signal_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::io, "cannot read " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (bytes.size() % 16 != 0) throw Error(ErrorKind::io, path + " is not a sequence of float64 pairs");
  GridSignal s;
  for (std::size_t i = 0; i < bytes.size(); i += 16) s.samples.emplace_back(get_le(&bytes[i]), get_le(&bytes[i + 8]));
  return s;
}

void write_signal_csv(const std::string& path, const GridSignal& s) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::io, "cannot write " + path);
  os.precision(17);
  os << "re,im\n";
  for (const cplx& v : s.samples) os << v.real() << ',' << v.imag() << '\n';
  if (!os) throw Error(ErrorKind::io, "write failed for " + path);
}

GridSignal read_signal_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot read " + path);
  std::string line;
  GridSignal s;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("re", 0) == 0) continue;
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(ls >> re)) throw Error(ErrorKind::io, path + ":" + std::to_string(lineno) + ": malformed row");
    if (ls >> comma && comma == ',') ls >> im;
    s.samples.emplace_back(re, im);
  }
  return s;
}

}  // namespace cocycle_lab
