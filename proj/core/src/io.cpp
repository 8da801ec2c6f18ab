#include "spikecount/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "spikecount/errors.hpp"

namespace spikecount {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail_at(const std::string& name, std::size_t line, std::size_t col,
                          const std::string& message) {
  throw input_error(name + ":" + std::to_string(line) + ":" + std::to_string(col) +
                    ": " + message);
}

double parse_double(const std::string& name, std::size_t lineno, const std::string& line,
                    const char* start, const char** end_out) {
  char* end = nullptr;
  const double v = std::strtod(start, &end);
  if (end == start) {
    fail_at(name, lineno, static_cast<std::size_t>(start - line.c_str()) + 1,
            "expected a number");
  }
  *end_out = end;
  return v;
}

std::vector<double> parse_row(const std::string& name, std::size_t lineno,
                              const std::string& line) {
  std::vector<double> row;
  const char* cursor = line.c_str();
  const char* line_end = cursor + line.size();
  while (cursor < line_end) {
    while (cursor < line_end &&
           (std::isspace(static_cast<unsigned char>(*cursor)) || *cursor == ',')) {
      ++cursor;
    }
    if (cursor >= line_end) break;
    const char* next = nullptr;
    row.push_back(parse_double(name, lineno, line, cursor, &next));
    cursor = next;
    if (cursor < line_end && !std::isspace(static_cast<unsigned char>(*cursor)) &&
        *cursor != ',') {
      fail_at(name, lineno, static_cast<std::size_t>(cursor - line.c_str()) + 1,
              "unexpected character '" + std::string(1, *cursor) + "'");
    }
  }
  return row;
}

}  // namespace

Eigen::MatrixXd load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    std::vector<double> row = parse_row(path, lineno, line);
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail_at(path, lineno, 1,
              "row has " + std::to_string(row.size()) + " values, expected " +
                  std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw input_error(path + ": no data rows");

  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (!data.allFinite()) throw input_error(path + ": non-finite entries");
  return data;
}

Spectrum load_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");

  auto read_header = [&](const char* key, std::size_t lineno) {
    std::string line;
    if (!std::getline(in, line)) fail_at(path, lineno, 1, "missing header line");
    const std::string body = trim(line);
    const std::string prefix = std::string(key) + ",";
    if (body.rfind(prefix, 0) != 0) {
      fail_at(path, lineno, 1, "expected header '" + prefix + "<int>'");
    }
    const std::string value = trim(body.substr(prefix.size()));
    try {
      return std::stoi(value);
    } catch (const std::exception&) {
      fail_at(path, lineno, prefix.size() + 1, "expected an integer");
    }
  };

  Spectrum spectrum;
  spectrum.p = read_header("p", 1);
  spectrum.n = read_header("n", 2);
  if (spectrum.p < 1 || spectrum.n < 1) {
    throw input_error(path + ": header p and n must be positive");
  }

  std::string line;
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const char* end = nullptr;
    const double v = parse_double(path, lineno, body, body.c_str(), &end);
    spectrum.values.push_back(v);
  }
  if (static_cast<int>(spectrum.values.size()) != spectrum.p) {
    throw input_error(path + ": expected " + std::to_string(spectrum.p) +
                      " eigenvalues, found " + std::to_string(spectrum.values.size()));
  }
  for (std::size_t i = 1; i < spectrum.values.size(); ++i) {
    if (spectrum.values[i] > spectrum.values[i - 1]) {
      throw input_error(path + ": eigenvalues must be non-increasing (line " +
                        std::to_string(i + 3) + ")");
    }
  }
  return spectrum;
}

void save_spectrum_csv(const Spectrum& spectrum, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write '" + path + "'");
  out << "p," << spectrum.p << "\n";
  out << "n," << spectrum.n << "\n";
  char buf[40];
  for (double v : spectrum.values) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << "\n";
  }
}

namespace {

struct ConfigLine {
  std::size_t lineno;
  std::string section;
  std::string key;
  std::string value;
};

std::vector<double> parse_numbers(const std::string& name, const ConfigLine& cl,
                                  std::size_t expected) {
  std::vector<double> values = parse_row(name, cl.lineno, cl.value);
  if (expected != 0 && values.size() != expected) {
    fail_at(name, cl.lineno, 1,
            "key '" + cl.key + "' expects " + std::to_string(expected) + " values");
  }
  return values;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, const std::string& name) {
  std::vector<ConfigLine> lines;
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_at(name, lineno, line.size(), "unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail_at(name, lineno, 1, "expected 'key = value'");
    ConfigLine cl;
    cl.lineno = lineno;
    cl.section = section;
    cl.key = trim(line.substr(0, eq));
    cl.value = trim(line.substr(eq + 1));
    if (cl.key.empty()) fail_at(name, lineno, 1, "empty key");
    if (cl.value.empty()) fail_at(name, lineno, eq + 2, "empty value");
    lines.push_back(std::move(cl));
  }

  ExperimentConfig cfg;
  cfg.model_id = "custom";
  cfg.spikes = SpikeSpec::null_model();
  GapEstimatorSettings gap;
  KnSettings kn;
  std::vector<Spike> spikes;
  bool saw_estimator = false;

  for (const auto& cl : lines) {
    if (cl.section.empty()) {
      if (cl.key == "model_id") {
        cfg.model_id = cl.value;
      } else if (cl.key == "replications") {
        cfg.replications = static_cast<int>(parse_numbers(name, cl, 1)[0]);
      } else if (cl.key == "root_seed") {
        try {
          cfg.root_seed = static_cast<std::uint64_t>(std::stoull(cl.value));
        } catch (const std::exception&) {
          fail_at(name, cl.lineno, 1, "root_seed expects an unsigned integer");
        }
      } else if (cl.key == "estimator") {
        cfg.estimator = estimator_from_name(cl.value);
        saw_estimator = true;
      } else if (cl.key == "noise_kind") {
        if (cl.value == "gaussian") {
          cfg.noise_kind = NoiseKind::gaussian;
        } else if (cl.value == "symmetric_heavy") {
          cfg.noise_kind = NoiseKind::symmetric_heavy;
        } else {
          fail_at(name, cl.lineno, 1, "unknown noise_kind '" + cl.value + "'");
        }
      } else {
        fail_at(name, cl.lineno, 1, "unknown key '" + cl.key + "'");
      }
    } else if (cl.section == "spikes") {
      if (cl.key == "sigma2") {
        cfg.spikes.sigma2 = parse_numbers(name, cl, 1)[0];
      } else if (cl.key == "spike") {
        const std::vector<double> v = parse_numbers(name, cl, 0);
        if (v.empty() || v.size() > 2) {
          fail_at(name, cl.lineno, 1, "spike expects 'alpha [multiplicity]'");
        }
        spikes.push_back({v[0], v.size() == 2 ? static_cast<int>(v[1]) : 1});
      } else {
        fail_at(name, cl.lineno, 1, "unknown key '" + cl.key + "' in [spikes]");
      }
    } else if (cl.section == "sizes") {
      if (cl.key != "size") {
        fail_at(name, cl.lineno, 1, "unknown key '" + cl.key + "' in [sizes]");
      }
      const std::vector<double> v = parse_numbers(name, cl, 2);
      cfg.sizes.emplace_back(static_cast<int>(v[0]), static_cast<int>(v[1]));
    } else if (cl.section == "estimator_settings") {
      if (cl.key == "s_max") {
        gap.s_max = static_cast<int>(parse_numbers(name, cl, 1)[0]);
      } else if (cl.key == "dn_override") {
        gap.dn_override = parse_numbers(name, cl, 1)[0];
      } else if (cl.key == "dn_scale") {
        gap.dn_scale = parse_numbers(name, cl, 1)[0];
      } else if (cl.key == "gamma") {
        kn.gamma = parse_numbers(name, cl, 1)[0];
      } else if (cl.key == "k_max") {
        kn.k_max = static_cast<int>(parse_numbers(name, cl, 1)[0]);
      } else if (cl.key == "sigma2") {
        kn.sigma2 = parse_numbers(name, cl, 1)[0];
      } else {
        fail_at(name, cl.lineno, 1,
                "unknown key '" + cl.key + "' in [estimator_settings]");
      }
    } else {
      fail_at(name, cl.lineno, 1, "unknown section '" + cl.section + "'");
    }
  }

  if (!saw_estimator) {
    throw input_error(name + ": missing 'estimator' key");
  }
  cfg.spikes.spikes = std::move(spikes);
  if (cfg.estimator == EstimatorKind::kn) {
    cfg.estimator_settings = kn;
  } else {
    cfg.estimator_settings = gap;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  return parse_experiment_config(in, path);
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                       bool with_timestamp) {
  if (with_timestamp) {
    std::time_t now = std::time(nullptr);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated " << stamp << "\n";
  }

  std::set<int> observed;
  for (const auto& row : rows) {
    for (const auto& [q, count] : row.stats.counts) observed.insert(q);
  }

  out << "model_id,p,n,c,sigma2_true,estimator,replications,root_seed,q0,"
         "freq_correct,mean_q,mse_q,mean_sigma2,mse_sigma2";
  for (int q : observed) out << ",count_" << q;
  out << "\n";

  char buf[40];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
  };

  for (const auto& row : rows) {
    const double c = static_cast<double>(row.p) / static_cast<double>(row.n);
    out << row.model_id << ',' << row.p << ',' << row.n << ',' << num(c) << ','
        << num(row.sigma2_true) << ',' << row.estimator << ','
        << row.stats.replications << ',' << row.root_seed << ','
        << row.stats.q0_true << ',' << num(row.stats.freq_correct) << ','
        << num(row.stats.mean_q) << ',' << num(row.stats.mse_q) << ',';
    if (row.stats.mean_sigma2) out << num(*row.stats.mean_sigma2);
    out << ',';
    if (row.stats.mse_sigma2) out << num(*row.stats.mse_sigma2);
    for (int q : observed) {
      const auto it = row.stats.counts.find(q);
      out << ',' << (it == row.stats.counts.end() ? 0 : it->second);
    }
    out << "\n";
  }
}

}  // namespace spikecount
