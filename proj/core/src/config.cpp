#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ccc/csv.hpp"
#include "ccc/experiment.hpp"

namespace ccc::experiment {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& value) {
  std::string v = value;
  for (char& c : v) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream is(v);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(csv::parse_double(tok));
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + " expects an integer, got '" + value + "'");
  }
  if (pos != value.size()) {
    throw std::invalid_argument("config: " + key + " expects an integer, got '" + value + "'");
  }
  return v;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += csv::format_double(xs[i]);
  }
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
  if (horizon < 2) throw std::invalid_argument("config: horizon must be >= 2");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("config: eps must be > 0");
  if (disturbance == DisturbanceScenario::Uniform && !(half_width > 0.0)) {
    throw std::invalid_argument("config: half_width must be > 0");
  }
  if (disturbance == DisturbanceScenario::Explicit && disturbance_file.empty()) {
    throw std::invalid_argument("config: explicit disturbance needs disturbance_file");
  }
  if (!(x0_sigma >= 0.0)) throw std::invalid_argument("config: x0_sigma must be >= 0");
  if (x0 && x0->size() != n) throw std::invalid_argument("config: x0 has the wrong dimension");
  if (a0 && (a0->rows() != n || a0->cols() != n)) {
    throw std::invalid_argument("config: a0 has the wrong dimension");
  }
  if (plant == PlantChoice::Reference && !a0 && n != 3) {
    throw std::invalid_argument("config: the reference plant is 3-dimensional");
  }
  if (tau < 0 || tau > horizon) throw std::invalid_argument("config: tau outside [0, horizon]");
  if (mu && !(*mu > 0.0 && *mu < 1.0)) throw std::invalid_argument("config: mu must be in (0, 1)");
  if (percentiles.empty()) throw std::invalid_argument("config: no percentiles");
  for (double p : percentiles) {
    if (!(p > 0.0 && p <= 100.0)) throw std::invalid_argument("config: percentile outside (0, 100]");
  }
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
}

void apply_setting(ExperimentConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (key == "n") {
    cfg.n = static_cast<int>(parse_int(key, value));
  } else if (key == "runs") {
    cfg.runs = static_cast<int>(parse_int(key, value));
  } else if (key == "horizon") {
    cfg.horizon = static_cast<int>(parse_int(key, value));
  } else if (key == "eps") {
    cfg.eps = csv::parse_double(value);
  } else if (key == "disturbance") {
    if (value == "uniform") {
      cfg.disturbance = DisturbanceScenario::Uniform;
    } else if (value == "zero") {
      cfg.disturbance = DisturbanceScenario::Zero;
    } else if (value == "explicit") {
      cfg.disturbance = DisturbanceScenario::Explicit;
    } else {
      throw std::invalid_argument("config: disturbance must be uniform, zero or explicit");
    }
  } else if (key == "half_width") {
    cfg.half_width = csv::parse_double(value);
  } else if (key == "disturbance_file") {
    cfg.disturbance_file = value;
  } else if (key == "x0_sigma") {
    cfg.x0_sigma = csv::parse_double(value);
  } else if (key == "x0") {
    if (value.empty() || value == "gaussian") {
      cfg.x0.reset();
    } else {
      const auto xs = parse_list(value);
      cfg.x0 = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    }
  } else if (key == "plant") {
    if (value == "random") {
      cfg.plant = PlantChoice::Random;
    } else if (value == "reference") {
      cfg.plant = PlantChoice::Reference;
    } else {
      throw std::invalid_argument("config: plant must be random or reference");
    }
  } else if (key == "a0") {
    if (value.empty()) {
      cfg.a0.reset();
    } else {
      const auto xs = parse_list(value);
      const auto k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(xs.size()))));
      if (k * k != static_cast<int>(xs.size()) || k == 0) {
        throw std::invalid_argument("config: a0 needs n*n entries in row-major order");
      }
      Eigen::MatrixXd m(k, k);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) m(i, j) = xs[i * k + j];
      }
      cfg.a0 = m;
    }
  } else if (key == "seed") {
    std::size_t pos = 0;
    try {
      cfg.seed = std::stoull(value, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != value.size() || value.front() == '-') {
      throw std::invalid_argument("config: seed expects an unsigned integer, got '" + value + "'");
    }
  } else if (key == "tau") {
    cfg.tau = static_cast<int>(parse_int(key, value));
  } else if (key == "mu") {
    if (value == "star") {
      cfg.mu.reset();
    } else {
      cfg.mu = csv::parse_double(value);
    }
  } else if (key == "percentiles") {
    cfg.percentiles = parse_list(value);
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_int(key, value));
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& is, ExperimentConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (csv::is_blank(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return parse_config(in, std::move(base));
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
  os << "n = " << cfg.n << "\n";
  os << "runs = " << cfg.runs << "\n";
  os << "horizon = " << cfg.horizon << "\n";
  os << "eps = " << csv::format_double(cfg.eps) << "\n";
  switch (cfg.disturbance) {
    case DisturbanceScenario::Uniform: os << "disturbance = uniform\n"; break;
    case DisturbanceScenario::Zero: os << "disturbance = zero\n"; break;
    case DisturbanceScenario::Explicit: os << "disturbance = explicit\n"; break;
  }
  os << "half_width = " << csv::format_double(cfg.half_width) << "\n";
  if (!cfg.disturbance_file.empty()) os << "disturbance_file = " << cfg.disturbance_file << "\n";
  os << "x0_sigma = " << csv::format_double(cfg.x0_sigma) << "\n";
  if (cfg.x0) {
    os << "x0 = " << join(std::vector<double>(cfg.x0->data(), cfg.x0->data() + cfg.x0->size()))
       << "\n";
  }
  os << "plant = " << (cfg.plant == PlantChoice::Reference ? "reference" : "random") << "\n";
  if (cfg.a0) {
    std::vector<double> xs;
    for (Eigen::Index i = 0; i < cfg.a0->rows(); ++i) {
      for (Eigen::Index j = 0; j < cfg.a0->cols(); ++j) xs.push_back((*cfg.a0)(i, j));
    }
    os << "a0 = " << join(xs) << "\n";
  }
  os << "seed = " << cfg.seed << "\n";
  os << "tau = " << cfg.tau << "\n";
  os << "mu = " << (cfg.mu ? csv::format_double(*cfg.mu) : std::string("star")) << "\n";
  os << "percentiles = " << join(cfg.percentiles) << "\n";
  os << "threads = " << cfg.threads << "\n";
}

ExperimentConfig single_run_defaults() {
  ExperimentConfig c;
  c.runs = 1;
  c.horizon = 40;
  c.plant = PlantChoice::Reference;
  c.x0 = Vector(3);
  (*c.x0) << 0.2, 0.0, 0.1;
  return c;
}

ExperimentConfig uniform_batch_defaults() { return {}; }

ExperimentConfig zero_batch_defaults() {
  ExperimentConfig c;
  c.disturbance = DisturbanceScenario::Zero;
  c.horizon = 60;
  c.x0_sigma = 1e-3;
  return c;
}

}  // namespace ccc::experiment
