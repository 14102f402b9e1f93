#include "ttent/events.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "ttent/errors.hpp"
#include "ttent/parton.hpp"
#include "ttent/text.hpp"

namespace ttent {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t chunk) : engine_(splitmix64(seed ^ splitmix64(chunk))) {}

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

Vec3 unit_vector(Rng& rng) {
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * M_PI * rng.uniform();
  const double rho = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

// Rejection sampler for the lepton-direction density of one spin state.
class LeptonSampler {
 public:
  explicit LeptonSampler(const TwoQubitState& s)
      : b_plus_(s.b_plus), b_minus_(s.b_minus), c_(s.c) {
    const double c_norm = Eigen::JacobiSVD<Mat3>(c_).singularValues()[0];
    bound_ = 1.0 + b_plus_.norm() + b_minus_.norm() + c_norm;
  }

  void draw(Rng& rng, Vec3& q_plus, Vec3& q_minus) const {
    while (true) {
      q_plus = unit_vector(rng);
      q_minus = unit_vector(rng);
      const double w = 1.0 + b_plus_.dot(q_plus) - b_minus_.dot(q_minus) - q_plus.dot(c_ * q_minus);
      if (rng.uniform() * bound_ < w) return;
    }
  }

 private:
  Vec3 b_plus_;
  Vec3 b_minus_;
  Mat3 c_;
  double bound_ = 1.0;
};

// Runs fn(rng, begin, end) over fixed-size chunks on a thread pool.
template <class Fn>
void run_chunks(std::size_t n, std::uint64_t seed, unsigned threads, Fn&& fn) {
  const std::size_t chunks = (n + kEventChunk - 1) / kEventChunk;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(chunks, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      try {
        Rng rng(seed, c);
        fn(rng, c * kEventChunk, std::min(n, (c + 1) * kEventChunk));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Piecewise-constant bound of the production density over cells in
// (u, cos_theta), u = sqrt(M - 2 m_t).
class ProductionEnvelope {
 public:
  static constexpr int kCellsU = 200;
  static constexpr int kCellsC = 40;
  static constexpr int kProbe = 4;
  static constexpr double kSafety = 1.25;

  ProductionEnvelope(const LuminosityTable& table, const PhysicsConfig& cfg, ChannelMix mix,
                     double m_lo, double m_hi)
      : table_(table), cfg_(cfg), mix_(mix) {
    threshold_ = 2.0 * cfg.m_t;
    u_lo_ = std::sqrt(m_lo - threshold_);
    du_ = (std::sqrt(m_hi - threshold_) - u_lo_) / kCellsU;
    dc_ = 2.0 / kCellsC;

    const int nu = kCellsU * kProbe + 1;
    const int nc = kCellsC * kProbe + 1;
    std::vector<double> lattice(static_cast<std::size_t>(nu) * nc);
    for (int i = 0; i < nu; ++i) {
      for (int j = 0; j < nc; ++j) {
        lattice[static_cast<std::size_t>(i) * nc + j] =
            density(u_lo_ + du_ * i / kProbe, -1.0 + dc_ * j / kProbe);
      }
    }
    bound_.resize(static_cast<std::size_t>(kCellsU) * kCellsC);
    cdf_.resize(bound_.size());
    double total = 0.0;
    for (int a = 0; a < kCellsU; ++a) {
      for (int b = 0; b < kCellsC; ++b) {
        double mx = 0.0;
        for (int i = a * kProbe; i <= (a + 1) * kProbe; ++i)
          for (int j = b * kProbe; j <= (b + 1) * kProbe; ++j)
            mx = std::max(mx, lattice[static_cast<std::size_t>(i) * nc + j]);
        const std::size_t idx = static_cast<std::size_t>(a) * kCellsC + b;
        bound_[idx] = kSafety * mx;
        total += bound_[idx];
        cdf_[idx] = total;
      }
    }
    if (!(total > 0.0)) throw Error(ErrorKind::envelope_failure, "production density vanishes in window");
  }

  // Density in (u, cos_theta) up to a constant: 2u beta/M^2 sum_I L^I A^I.
  double density(double u, double c) const {
    const double m = threshold_ + u * u;
    const double beta = beta_of_mass(m, cfg_);
    const LumiValues l = apply_mix(table_.interpolate(m), mix_);
    double a = 0.0;
    if (l.l_qq > 0.0) a += l.l_qq * coefficients(Channel::qqbar, beta, c).a_tilde;
    if (l.l_gg > 0.0) a += l.l_gg * coefficients(Channel::gg, beta, c).a_tilde;
    return 2.0 * u * beta / (m * m) * a;
  }

  /// Draws (M, cos_theta); returns the number of trials used.
  std::size_t draw(Rng& rng, double& m, double& c) const {
    for (std::size_t trials = 1;; ++trials) {
      const double x = rng.uniform() * cdf_.back();
      const auto idx = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), x) - cdf_.begin());
      const std::size_t cell = std::min(idx, cdf_.size() - 1);
      const std::size_t a = cell / kCellsC;
      const std::size_t b = cell % kCellsC;
      const double u = u_lo_ + du_ * (static_cast<double>(a) + rng.uniform());
      c = -1.0 + dc_ * (static_cast<double>(b) + rng.uniform());
      const double g = density(u, c);
      if (g > bound_[cell]) {
        throw Error(ErrorKind::envelope_failure, "production density exceeds its envelope");
      }
      if (rng.uniform() * bound_[cell] < g) {
        m = threshold_ + u * u;
        return trials;
      }
      if (trials > 10000) throw Error(ErrorKind::envelope_failure, "acceptance rate below 1e-4");
    }
  }

 private:
  const LuminosityTable& table_;
  PhysicsConfig cfg_;
  ChannelMix mix_;
  double threshold_ = 0.0;
  double u_lo_ = 0.0;
  double du_ = 0.0;
  double dc_ = 0.0;
  std::vector<double> bound_;
  std::vector<double> cdf_;
};

template <class T>
void put_le(std::ostream& out, T v) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(ErrorKind::parse_error, "truncated binary event file");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

constexpr char kMagic[8] = {'T', 'T', 'E', 'V', '0', '0', '0', '1'};

void check_event(const DileptonEvent& e, const std::string& where) {
  if (std::abs(e.q_plus.norm() - 1.0) > 1e-9 || std::abs(e.q_minus.norm() - 1.0) > 1e-9) {
    throw Error(ErrorKind::parse_error, where + ": lepton direction is not a unit vector");
  }
}

bool has_csv_extension(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

}  // namespace

std::vector<DileptonEvent> sample_fixed_state(const TwoQubitState& state, std::size_t n,
                                              std::uint64_t seed, double m_ttbar, double cos_theta,
                                              unsigned threads) {
  if (!is_physical(state)) throw Error(ErrorKind::input_not_physical, "cannot sample an unphysical state");
  const LeptonSampler sampler(state);
  std::vector<DileptonEvent> events(n);
  run_chunks(n, seed, threads, [&](Rng& rng, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      DileptonEvent& e = events[i];
      e.m_ttbar = m_ttbar;
      e.cos_theta = cos_theta;
      sampler.draw(rng, e.q_plus, e.q_minus);
    }
  });
  return events;
}

std::vector<DileptonEvent> sample_events(std::size_t n, double m_max, const LuminosityTable& table,
                                         const PhysicsConfig& cfg, std::uint64_t seed,
                                         ChannelMix mix, double m_lo, unsigned threads) {
  const double lo = std::max(m_lo, 2.0 * cfg.m_t);
  if (!(m_max > lo)) throw Error(ErrorKind::empty_window, "event window is empty");
  if (lo < table.m_min() || m_max > table.m_max()) {
    throw Error(ErrorKind::out_of_range, "event window not covered by the luminosity table");
  }
  const ProductionEnvelope envelope(table, cfg, mix, lo, m_max);
  std::vector<DileptonEvent> events(n);
  std::atomic<std::size_t> trials{0};
  run_chunks(n, seed, threads, [&](Rng& rng, std::size_t begin, std::size_t end) {
    std::size_t local = 0;
    for (std::size_t i = begin; i < end; ++i) {
      DileptonEvent& e = events[i];
      local += envelope.draw(rng, e.m_ttbar, e.cos_theta);
      const double beta = beta_of_mass(e.m_ttbar, cfg);
      const LumiValues l = apply_mix(table.interpolate(e.m_ttbar), mix);
      TwoQubitState s = mix_point(beta, e.cos_theta, l.l_qq, l.l_gg).state;
      const double phi = 2.0 * M_PI * rng.uniform();
      s.c = rotate_correlations_to_beam(s.c, e.cos_theta, phi);
      s.basis = Basis::beam;
      LeptonSampler(s).draw(rng, e.q_plus, e.q_minus);
    }
    trials += local;
  });
  if (n > 0 && static_cast<double>(n) / static_cast<double>(trials.load()) < 1e-4) {
    throw Error(ErrorKind::envelope_failure, "acceptance rate below 1e-4");
  }
  return events;
}

void write_events_csv(std::ostream& out, const std::vector<DileptonEvent>& events) {
  out << kEventColumns << '\n';
  char buf[512];
  for (const DileptonEvent& e : events) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", e.m_ttbar,
                  e.cos_theta, e.q_plus.x(), e.q_plus.y(), e.q_plus.z(), e.q_minus.x(),
                  e.q_minus.y(), e.q_minus.z());
    out << buf;
  }
}

std::vector<DileptonEvent> read_events_csv(std::istream& in) {
  std::vector<DileptonEvent> events;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = text::trim(text::strip_comment(line));
    if (t.empty()) continue;
    if (t == kEventColumns) continue;
    const auto fields = text::split(t, ',');
    double v[8];
    if (fields.size() != 8) {
      throw Error(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": expected 8 fields");
    }
    for (int i = 0; i < 8; ++i) {
      if (!text::parse_double(fields[i], v[i])) {
        throw Error(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": bad number");
      }
    }
    DileptonEvent e{v[0], v[1], Vec3(v[2], v[3], v[4]), Vec3(v[5], v[6], v[7])};
    check_event(e, "line " + std::to_string(lineno));
    events.push_back(e);
  }
  return events;
}

void write_events_binary(std::ostream& out, const std::vector<DileptonEvent>& events) {
  out.write(kMagic, sizeof kMagic);
  put_le<std::uint64_t>(out, events.size());
  for (const DileptonEvent& e : events) {
    put_le(out, e.m_ttbar);
    put_le(out, e.cos_theta);
    for (int i = 0; i < 3; ++i) put_le(out, e.q_plus[i]);
    for (int i = 0; i < 3; ++i) put_le(out, e.q_minus[i]);
  }
}

std::vector<DileptonEvent> read_events_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorKind::parse_error, "not a TTEV0001 event file");
  }
  const auto count = get_le<std::uint64_t>(in);
  std::vector<DileptonEvent> events;
  events.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
  for (std::uint64_t k = 0; k < count; ++k) {
    DileptonEvent e;
    e.m_ttbar = get_le<double>(in);
    e.cos_theta = get_le<double>(in);
    for (int i = 0; i < 3; ++i) e.q_plus[i] = get_le<double>(in);
    for (int i = 0; i < 3; ++i) e.q_minus[i] = get_le<double>(in);
    check_event(e, "event " + std::to_string(k));
    events.push_back(e);
  }
  return events;
}

void save_events(const std::string& path, const std::vector<DileptonEvent>& events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::parse_error, "cannot write '" + path + "'");
  if (has_csv_extension(path)) {
    write_events_csv(out, events);
  } else {
    write_events_binary(out, events);
  }
}

std::vector<DileptonEvent> load_events(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse_error, "cannot open '" + path + "'");
  return has_csv_extension(path) ? read_events_csv(in) : read_events_binary(in);
}

}  // namespace ttent
