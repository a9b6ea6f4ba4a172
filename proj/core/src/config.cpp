#include "qobs/config.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "qobs/units.hpp"

namespace qobs {

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}{}", line, key.empty() ? "" : key + ": ", message)
                                  : fmt::format("{}{}", key.empty() ? "" : key + ": ", message)),
      key_(std::move(key)),
      line_(line) {}

namespace {

// Minimal TOML subset: `[table]` headers, `key = value` with dotted keys,
// `#` comments, basic/literal strings, booleans and numbers.
using Scalar = std::variant<std::string, double, bool>;

struct Entry {
  Scalar value;
  int line = 0;
};

using Document = std::map<std::string, Entry>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const auto part = key.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (part.empty()) return false;
    for (char c : part) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    }
    if (dot == std::string_view::npos) return true;
    start = dot + 1;
  }
}

// Removes a trailing comment, respecting quoted strings.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\' && quote == '"') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

Scalar parse_scalar(std::string_view raw, int line) {
  if (raw.empty()) throw ConfigError("", line, "missing value");
  if (raw.front() == '"' || raw.front() == '\'') {
    const char quote = raw.front();
    if (raw.size() < 2 || raw.back() != quote) throw ConfigError("", line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      char c = raw[i];
      if (quote == '"' && c == '\\') {
        if (i + 2 >= raw.size()) throw ConfigError("", line, "dangling escape");
        const char e = raw[++i];
        switch (e) {
          case 'n':
            c = '\n';
            break;
          case 't':
            c = '\t';
            break;
          case '"':
          case '\\':
            c = e;
            break;
          default:
            throw ConfigError("", line, fmt::format("unsupported escape '\\{}'", e));
        }
      } else if (c == quote) {
        throw ConfigError("", line, "unexpected quote inside string");
      }
      out.push_back(c);
    }
    return out;
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  std::string digits;
  for (char c : raw) {
    if (c != '_') digits.push_back(c);
  }
  if (digits.front() == '+') digits.erase(0, 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw ConfigError("", line, fmt::format("cannot parse value '{}'", raw));
  }
  return value;
}

Document parse_document(std::string_view text) {
  Document doc;
  std::string table;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", line_no, "malformed table header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name)) throw ConfigError("", line_no, fmt::format("invalid table name '{}'", name));
      table = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("", line_no, "expected 'key = value'");
    auto key = trim(line.substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
    if (!valid_key(key)) throw ConfigError("", line_no, fmt::format("invalid key '{}'", key));
    const std::string path = table.empty() ? std::string(key) : table + "." + std::string(key);
    Scalar value = parse_scalar(trim(line.substr(eq + 1)), line_no);
    if (doc.count(path)) {
      throw ConfigError(path, line_no, fmt::format("duplicate key (first set on line {})", doc[path].line));
    }
    doc.emplace(path, Entry{std::move(value), line_no});
  }
  return doc;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "device",         "lattice_spacing", "eps0_eV",           "hopping_eV",      "lambda_rel",
      "kT_E_au",        "kdT_au",          "omega_c_au",        "omega_floor_au",  "observer.site",
      "observer.gamma", "sweep.gamma_max", "sweep.gamma_steps", "sweep.kdT_max",   "sweep.kdT_steps",
      "mode",           "cut.top_bond",    "cut.bottom_bond",   "defect.site",     "defect.shift_eV"};
  return keys;
}

class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  std::optional<double> number(const std::string& key) const {
    const auto* e = find(key);
    if (!e) return std::nullopt;
    if (const auto* v = std::get_if<double>(&e->value)) {
      if (!std::isfinite(*v)) throw ConfigError(key, e->line, "value must be finite");
      return *v;
    }
    throw ConfigError(key, e->line, "expected a number");
  }

  std::optional<int> integer(const std::string& key) const {
    const auto v = number(key);
    if (!v) return std::nullopt;
    if (std::trunc(*v) != *v || std::abs(*v) > 1e9) {
      throw ConfigError(key, line(key), "expected an integer");
    }
    return static_cast<int>(*v);
  }

  std::optional<std::string> string(const std::string& key) const {
    const auto* e = find(key);
    if (!e) return std::nullopt;
    if (const auto* v = std::get_if<std::string>(&e->value)) return *v;
    throw ConfigError(key, e->line, "expected a string");
  }

  // Accepts either a string or an integer; integers are returned as text.
  std::optional<std::string> label(const std::string& key) const {
    const auto* e = find(key);
    if (!e) return std::nullopt;
    if (const auto* v = std::get_if<std::string>(&e->value)) return *v;
    if (std::holds_alternative<double>(e->value)) return std::to_string(*integer(key));
    throw ConfigError(key, e->line, "expected a site name or id");
  }

  int line(const std::string& key) const {
    const auto* e = find(key);
    return e ? e->line : 0;
  }

 private:
  const Entry* find(const std::string& key) const {
    const auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &it->second;
  }

  const Document& doc_;
};

// Turns an invalid_argument from the physics layer into a keyed ConfigError.
template <typename Fn>
auto with_key(const std::string& key, int line, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, line, e.what());
  }
}

std::string format_number(double v) { return fmt::format("{}", v); }

}  // namespace

std::vector<double> linspace(double first, double last, int count) {
  std::vector<double> out;
  if (count <= 0) return out;
  if (count == 1) return {first};
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    out.push_back(k + 1 == count ? last : first + (last - first) * k / (count - 1));
  }
  return out;
}

int resolve_site(const DeviceSpec& device, std::string_view label) {
  if (const auto named = parse_named_site(label)) return device.site(*named);
  int id = -1;
  const auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), id);
  if (ec != std::errc{} || ptr != label.data() + label.size()) {
    throw std::invalid_argument(fmt::format("unknown site '{}'", label));
  }
  if (id < 0 || id >= device.size()) {
    throw std::invalid_argument(fmt::format("site id {} out of range 0..{}", id, device.size() - 1));
  }
  return id;
}

SweepGrid make_grid(const SweepSettings& sweep, double gamma_max, std::string observer_site) {
  SweepGrid grid;
  grid.gamma_values = linspace(0.0, gamma_max, sweep.gamma_steps);
  grid.kdT_values = linspace(0.0, sweep.kdT_max, sweep.kdT_steps);
  grid.observer_site = std::move(observer_site);
  return grid;
}

RunConfig resolve_config(const ConfigSource& s) {
  RunConfig cfg;
  cfg.source = s;

  PhysParams& p = cfg.params;
  p.eps0 = ev_to_hartree(s.eps0_eV);
  p.hopping = ev_to_hartree(s.hopping_eV);
  p.lambda = s.lambda_rel * std::sqrt(std::max(p.eps0, 0.0));
  p.kT_E = s.kT_E_au;
  p.kdT = s.kdT_au;
  p.omega_c = s.omega_c_au;
  p.omega_floor = s.omega_floor_au;
  p.gamma_D = s.observer_gamma;
  p.mode = s.mode;
  p.lattice_spacing = s.lattice_spacing;

  if (!(s.eps0_eV > 0.0)) throw ConfigError("eps0_eV", 0, "must be positive");
  if (!(s.hopping_eV > 0.0)) throw ConfigError("hopping_eV", 0, "must be positive");
  if (!(s.lambda_rel >= 0.0)) throw ConfigError("lambda_rel", 0, "must be non-negative");
  if (!(s.lattice_spacing > 0.0)) throw ConfigError("lattice_spacing", 0, "must be positive");
  if (!(s.kT_E_au > 0.0)) throw ConfigError("kT_E_au", 0, "must be positive");
  if (!(s.kdT_au >= 0.0)) throw ConfigError("kdT_au", 0, "must be non-negative");
  if (!(s.kdT_au < s.kT_E_au)) throw ConfigError("kdT_au", 0, "temperature of cold bath must be positive");
  if (s.omega_c_au && !(*s.omega_c_au > 0.0)) throw ConfigError("omega_c_au", 0, "must be positive");
  if (!(s.omega_floor_au >= 0.0)) throw ConfigError("omega_floor_au", 0, "must be non-negative");
  if (!(s.observer_gamma >= 0.0)) throw ConfigError("observer.gamma", 0, "must be non-negative");
  if (s.sweep.gamma_max && !(*s.sweep.gamma_max >= 0.0)) {
    throw ConfigError("sweep.gamma_max", 0, "must be non-negative");
  }
  if (s.sweep.gamma_steps < 1) throw ConfigError("sweep.gamma_steps", 0, "must be at least 1");
  if (s.sweep.kdT_steps < 1) throw ConfigError("sweep.kdT_steps", 0, "must be at least 1");
  if (!(s.sweep.kdT_max >= 0.0)) throw ConfigError("sweep.kdT_max", 0, "must be non-negative");
  if (!(s.sweep.kdT_max < s.kT_E_au)) {
    throw ConfigError("sweep.kdT_max", 0, "temperature of cold bath must be positive");
  }
  for (const auto& [key, value] : {std::pair{"cut.top_bond", s.cut.top_bond}, {"cut.bottom_bond", s.cut.bottom_bond}}) {
    if (value < 0 || value > 5) throw ConfigError(key, 0, "bond position must lie in 0..5");
  }

  cfg.device = with_key("device", 0, [&] { return build_device(s.device, p); });
  if (s.defect) {
    if (s.defect->site < 0 || s.defect->site >= cfg.device.size()) {
      throw ConfigError("defect.site", 0, "site id out of range");
    }
    cfg.device.sites[s.defect->site].onsite += ev_to_hartree(s.defect->shift_eV);
  }
  if (s.observer_site) {
    p.observer_site = with_key("observer.site", 0, [&] { return resolve_site(cfg.device, *s.observer_site); });
  }
  with_key("", 0, [&] {
    validate(p);
    return 0;
  });
  return cfg;
}

RunConfig parse_config(std::string_view text) {
  const Document doc = parse_document(text);
  for (const auto& [key, entry] : doc) {
    if (!known_keys().count(key)) throw ConfigError(key, entry.line, "unknown key");
  }
  const Reader r(doc);
  ConfigSource s;

  if (const auto device = r.string("device")) {
    if (*device == "flat") {
      s.device = DeviceKind::Flat;
    } else if (*device == "ratchet") {
      s.device = DeviceKind::Ratchet;
    } else {
      throw ConfigError("device", r.line("device"), fmt::format("expected 'flat' or 'ratchet', got '{}'", *device));
    }
  } else {
    throw ConfigError("device", 0, "required key is missing");
  }
  if (const auto mode = r.string("mode")) {
    if (*mode == "hermitian") {
      s.mode = DissipatorMode::Hermitian;
    } else if (*mode == "literal") {
      s.mode = DissipatorMode::Literal;
    } else {
      throw ConfigError("mode", r.line("mode"), fmt::format("expected 'hermitian' or 'literal', got '{}'", *mode));
    }
  }

  auto set = [&](const char* key, double& field) {
    if (const auto v = r.number(key)) field = *v;
  };
  set("lattice_spacing", s.lattice_spacing);
  set("eps0_eV", s.eps0_eV);
  set("hopping_eV", s.hopping_eV);
  set("lambda_rel", s.lambda_rel);
  set("kT_E_au", s.kT_E_au);
  set("kdT_au", s.kdT_au);
  set("omega_floor_au", s.omega_floor_au);
  set("observer.gamma", s.observer_gamma);
  set("sweep.kdT_max", s.sweep.kdT_max);
  s.omega_c_au = r.number("omega_c_au");
  s.sweep.gamma_max = r.number("sweep.gamma_max");
  s.observer_site = r.label("observer.site");
  if (const auto v = r.integer("sweep.gamma_steps")) s.sweep.gamma_steps = *v;
  if (const auto v = r.integer("sweep.kdT_steps")) s.sweep.kdT_steps = *v;
  if (const auto v = r.integer("cut.top_bond")) s.cut.top_bond = *v;
  if (const auto v = r.integer("cut.bottom_bond")) s.cut.bottom_bond = *v;
  const auto defect_site = r.integer("defect.site");
  const auto defect_shift = r.number("defect.shift_eV");
  if (defect_site.has_value() != defect_shift.has_value()) {
    throw ConfigError(defect_site ? "defect.shift_eV" : "defect.site", 0,
                      "defect.site and defect.shift_eV must be given together");
  }
  if (defect_site) s.defect = SiteShift{*defect_site, *defect_shift};

  try {
    return resolve_config(s);
  } catch (const ConfigError& e) {
    // Attach the source line where the key was set.
    if (e.line() == 0 && !e.key().empty() && r.line(e.key()) > 0) {
      const std::string what = e.what();
      const std::string prefix = e.key() + ": ";
      throw ConfigError(e.key(), r.line(e.key()), what.substr(what.find(prefix) == 0 ? prefix.size() : 0));
    }
    throw;
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, fmt::format("cannot open config file '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string emit_config(const ConfigSource& s) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
  line("device", fmt::format("\"{}\"", to_string(s.device)));
  line("mode", fmt::format("\"{}\"", to_string(s.mode)));
  line("lattice_spacing", format_number(s.lattice_spacing));
  line("eps0_eV", format_number(s.eps0_eV));
  line("hopping_eV", format_number(s.hopping_eV));
  line("lambda_rel", format_number(s.lambda_rel));
  line("kT_E_au", format_number(s.kT_E_au));
  line("kdT_au", format_number(s.kdT_au));
  if (s.omega_c_au) line("omega_c_au", format_number(*s.omega_c_au));
  line("omega_floor_au", format_number(s.omega_floor_au));

  out += "\n[observer]\n";
  if (s.observer_site) {
    const bool numeric = !s.observer_site->empty() &&
                         s.observer_site->find_first_not_of("0123456789") == std::string::npos;
    line("site", numeric ? *s.observer_site : fmt::format("\"{}\"", *s.observer_site));
  }
  line("gamma", format_number(s.observer_gamma));

  out += "\n[sweep]\n";
  if (s.sweep.gamma_max) line("gamma_max", format_number(*s.sweep.gamma_max));
  line("gamma_steps", std::to_string(s.sweep.gamma_steps));
  line("kdT_max", format_number(s.sweep.kdT_max));
  line("kdT_steps", std::to_string(s.sweep.kdT_steps));

  out += "\n[cut]\n";
  line("top_bond", std::to_string(s.cut.top_bond));
  line("bottom_bond", std::to_string(s.cut.bottom_bond));

  if (s.defect) {
    out += "\n[defect]\n";
    line("site", std::to_string(s.defect->site));
    line("shift_eV", format_number(s.defect->shift_eV));
  }
  return out;
}

}  // namespace qobs
