#include "csop/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "csop/error.hpp"

namespace csop::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

KeySpec key(std::string name, ValueType type, std::optional<std::string> fallback, std::string help) {
  return {std::move(name), type, std::move(fallback), std::move(help)};
}

const std::optional<std::string> kRequired = std::nullopt;
const std::optional<std::string> kUnset = std::string();

std::vector<Schema> build_schemas() {
  using V = ValueType;
  const std::vector<KeySpec> common{
      key("format", V::text, "csv", "csv or json"),
      key("seed", V::integer, "7", "seed for randomized checks"),
  };
  std::vector<Schema> out{
      {"takagi",
       "Takagi factorization A = U diag(sigma) U^T of a complex symmetric matrix",
       {key("matrix", V::text, kRequired, "CSV of interleaved real,imag pairs")}},
      {"antilinear",
       "antilinear eigenpairs (A - z) u = lambda P conj(u)",
       {key("matrix", V::text, kRequired, "CSV of interleaved real,imag pairs"),
        key("conjugation", V::text, kUnset, "CSV for the symmetric unitary P (default identity)"),
        key("z", V::complex_number, "0", "spectral shift")}},
      {"decay-bound",
       "critical decay rate q_c(E) and prefactor C(q, E) across a gap",
       {key("e_minus", V::real, kRequired, "top of the lower band"),
        key("e_plus", V::real, kRequired, "bottom of the upper band"),
        key("e_bottom", V::real, "0", "bottom of the lower band"),
        key("e", V::real, kUnset, "single probe energy (default: a grid across the gap)"),
        key("points", V::integer, "41", "energies in the grid"),
        key("q", V::real, "0", "decay rate candidate"),
        key("eps", V::real, "0.5", "averaging radius"),
        key("d", V::integer, "1", "spatial dimension for the ball volume")}},
      {"kernel-scan",
       "ball-averaged resolvent or projector kernel of a gapped chain and its decay check",
       {key("mode", V::text, "resolvent", "resolvent or projector"),
        key("v0", V::real, "3", "delta comb strength (unit lattice)"),
        key("length", V::real, "40", "domain length"),
        key("points", V::integer, "2000", "interior grid points"),
        key("potential", V::text, kUnset, "CSV of (x, v) replacing the comb"),
        key("lower_band_count", V::integer, kUnset, "states in the lower band (default: cells)"),
        key("eps", V::real, "0.25", "averaging radius"),
        key("e", V::real, kUnset, "energy (default: E_bar, or mid-gap)"),
        key("q_fractions", V::real_list, "0.5,0.75,0.9", "q as fractions of q_c"),
        key("anchor_first", V::real, "8.5", "first ball centre"),
        key("anchor_last", V::real, "31.5", "last ball centre"),
        key("anchor_step", V::real, "1", "ball centre spacing"),
        key("prefactor_exponent", V::real, "0.5", "projector fit prefactor exponent")}},
      {"kp-fig1",
       "Kronig-Penney exact decay vs the gap-only bound",
       {key("count", V::integer, "20", "number of v0 values"),
        key("ratio_lo", V::real, "0.1", "smallest G/W"),
        key("ratio_hi", V::real, "10", "largest G/W"),
        key("v0_values", V::real_list, kUnset, "explicit v0 list (overrides the G/W range)")}},
      {"resonance",
       "resonance of alpha x^2 e^{-x} by complex scaling and its perturbation scan",
       {key("alpha", V::real, "7.5", "potential strength"),
        key("length", V::real, "40", "domain length"),
        key("points", V::integer, "1500", "interior grid points"),
        key("points_coarse", V::integer, kUnset, "coarse grid for Richardson extrapolation"),
        key("theta", V::complex_number, "0.3i", "scaling angle"),
        key("delta_theta", V::complex_number, "0.02i", "stationarity probe step"),
        key("gammas", V::real_list, "0", "perturbation strengths (w = v)"),
        key("z_probe", V::complex_number, kUnset, "probe point (default z_res + 0.01)"),
        key("a", V::real, kUnset, "relative bound a (with b; default fitted)"),
        key("b", V::real, kUnset, "relative bound b")}},
      {"resolvent-map",
       "resolvent norm of the scaled Hamiltonian on a rectangular z grid",
       {key("alpha", V::real, "7.5", "potential strength"),
        key("length", V::real, "40", "domain length"),
        key("points", V::integer, "400", "interior grid points"),
        key("theta", V::complex_number, "0.3i", "scaling angle"),
        key("gamma", V::real, "0", "perturbation strength (w = v)"),
        key("re_min", V::real, "0", ""),
        key("re_max", V::real, "6", ""),
        key("re_count", V::integer, "61", ""),
        key("im_min", V::real, "-0.5", ""),
        key("im_max", V::real, "0", ""),
        key("im_count", V::integer, "26", "")}},
  };
  for (auto& s : out) s.keys.insert(s.keys.end(), common.begin(), common.end());
  return out;
}

bool valid_as(ValueType type, std::string_view v) {
  switch (type) {
    case ValueType::integer: {
      long long x = 0;
      const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      return ec == std::errc() && ptr == v.data() + v.size();
    }
    case ValueType::real: return parse_real(v).has_value();
    case ValueType::complex_number: return parse_complex(v).has_value();
    case ValueType::real_list: return parse_real_list(v).has_value();
    case ValueType::text: return true;
  }
  return false;
}

const char* type_name(ValueType t) {
  switch (t) {
    case ValueType::integer: return "integer";
    case ValueType::real: return "real";
    case ValueType::complex_number: return "complex";
    case ValueType::real_list: return "list of reals";
    case ValueType::text: return "text";
  }
  return "?";
}

[[noreturn]] void violated(const std::string& what) { throw Error(Errc::precondition_violated, what); }

}  // namespace

const KeySpec* Schema::find(std::string_view k) const {
  for (const auto& s : keys)
    if (s.name == k) return &s;
  return nullptr;
}

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> all = build_schemas();
  return all;
}

const Schema& schema_for(std::string_view subcommand) {
  for (const auto& s : schemas())
    if (s.subcommand == subcommand) return s;
  throw Error(Errc::invalid_argument, "unknown subcommand '" + std::string(subcommand) + "'");
}

std::string usage() {
  std::ostringstream os;
  os << "usage: csop <subcommand> [--config FILE] [--set key=value]... [--format csv|json] [--output FILE]\n\n"
        "subcommands:\n";
  for (const auto& s : schemas()) os << "  " << s.subcommand << std::string(16 - s.subcommand.size(), ' ') << s.summary << "\n";
  return os.str();
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) return std::nullopt;
  return x;
}

std::optional<cplx> parse_complex(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '(' && s.back() == ')') {
    const auto inner = s.substr(1, s.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    const auto re = parse_real(inner.substr(0, comma));
    const auto im = parse_real(inner.substr(comma + 1));
    if (!re || !im) return std::nullopt;
    return cplx(*re, *im);
  }
  if (s.back() != 'i' && s.back() != 'j') {
    const auto re = parse_real(s);
    if (!re) return std::nullopt;
    return cplx(*re, 0.0);
  }
  const auto body = s.substr(0, s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [](std::string_view t) -> std::optional<double> {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (split == std::string_view::npos) {
    const auto im = imag_part(body);
    if (!im) return std::nullopt;
    return cplx(0.0, *im);
  }
  const auto re = parse_real(body.substr(0, split));
  const auto im = imag_part(body.substr(split));
  if (!re || !im) return std::nullopt;
  return cplx(*re, *im);
}

std::optional<std::vector<double>> parse_real_list(std::string_view s) {
  std::vector<double> out;
  s = trim(s);
  if (s.empty()) return std::nullopt;
  while (true) {
    const auto comma = s.find(',');
    const auto x = parse_real(s.substr(0, comma));
    if (!x) return std::nullopt;
    out.push_back(*x);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

long long RunConfig::integer(const std::string& k) const { return std::stoll(text(k)); }
double RunConfig::real(const std::string& k) const { return *parse_real(text(k)); }
cplx RunConfig::complex(const std::string& k) const { return *parse_complex(text(k)); }
std::vector<double> RunConfig::reals(const std::string& k) const { return *parse_real_list(text(k)); }

const std::string& RunConfig::text(const std::string& k) const {
  const auto it = values.find(k);
  if (it == values.end()) throw Error(Errc::missing_required, "key '" + k + "' is not set");
  return it->second;
}

RunConfig parse_config(std::string_view subcommand, std::string_view text) {
  const Schema& schema = schema_for(subcommand);
  RunConfig cfg;
  cfg.subcommand = schema.subcommand;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::type_mismatch, "line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string k(trim(line.substr(0, eq)));
    const std::string v(trim(line.substr(eq + 1)));
    const KeySpec* spec = schema.find(k);
    if (!spec)
      throw Error(Errc::unknown_key,
                  "line " + std::to_string(line_no) + ": unknown key '" + k + "' for " + schema.subcommand);
    if (!valid_as(spec->type, v))
      throw Error(Errc::type_mismatch, "line " + std::to_string(line_no) + ": '" + k + "' expects " +
                                           type_name(spec->type) + ", got '" + v + "'");
    cfg.values[k] = v;
  }
  for (const auto& spec : schema.keys) {
    cfg.order.push_back(spec.name);
    if (cfg.values.count(spec.name)) continue;
    if (!spec.fallback) throw Error(Errc::missing_required, "required key '" + spec.name + "' is missing");
    if (!spec.fallback->empty()) cfg.values[spec.name] = *spec.fallback;
  }
  return cfg;
}

std::string serialize(const RunConfig& cfg) {
  std::string out = "# " + cfg.subcommand + "\n";
  for (const auto& k : cfg.order) {
    const auto it = cfg.values.find(k);
    if (it != cfg.values.end()) out += k + " = " + it->second + "\n";
  }
  return out;
}

void validate(const RunConfig& cfg) {
  auto positive = [&](const char* k) {
    if (cfg.has(k) && !(cfg.real(k) > 0.0)) violated(std::string(k) + " must satisfy " + k + " > 0");
  };
  auto at_least = [&](const char* k, long long lo) {
    if (cfg.has(k) && cfg.integer(k) < lo)
      violated(std::string(k) + " must satisfy " + k + " >= " + std::to_string(lo));
  };
  const std::string& format = cfg.text("format");
  if (format != "csv" && format != "json") violated("format must be csv or json");

  for (const char* k : {"eps", "length", "v0", "ratio_lo", "ratio_hi", "anchor_step"}) positive(k);
  for (const char* k : {"points", "points_coarse"}) at_least(k, 3);
  for (const char* k : {"count", "re_count", "im_count", "d", "lower_band_count"}) at_least(k, 1);

  if (cfg.has("q") && !(cfg.real("q") >= 0.0)) violated("q must satisfy q >= 0");
  if (cfg.has("e_minus") && !(cfg.real("e_minus") > 0.0)) violated("e_minus must satisfy e_minus > 0");
  if (cfg.has("e_plus") && !(cfg.real("e_plus") > cfg.real("e_minus")))
    violated("e_plus must satisfy e_plus > e_minus");
  if (cfg.has("e_bottom") && cfg.has("e_minus") && !(cfg.real("e_bottom") <= cfg.real("e_minus")))
    violated("e_bottom must satisfy e_bottom <= e_minus");
  if (cfg.has("ratio_hi") && !(cfg.real("ratio_hi") >= cfg.real("ratio_lo")))
    violated("ratio_hi must satisfy ratio_hi >= ratio_lo");
  if (cfg.has("v0_values"))
    for (double v : cfg.reals("v0_values"))
      if (!(v > 0.0)) violated("v0_values must all be > 0");
  if (cfg.has("q_fractions"))
    for (double f : cfg.reals("q_fractions"))
      if (!(f >= 0.0 && f < 1.0)) violated("q_fractions must lie in [0, 1)");
  if (cfg.has("mode") && cfg.text("mode") != "resolvent" && cfg.text("mode") != "projector")
    violated("mode must be resolvent or projector");
  if (cfg.has("anchor_last") && !(cfg.real("anchor_last") >= cfg.real("anchor_first")))
    violated("anchor_last must satisfy anchor_last >= anchor_first");
  if (cfg.has("a") != cfg.has("b")) violated("relative bound needs both a and b");
  if (cfg.has("a") && !(cfg.real("a") >= 0.0 && cfg.real("a") < 1.0)) violated("a must satisfy 0 <= a < 1");
  if (cfg.has("b") && !(cfg.real("b") >= 0.0)) violated("b must satisfy b >= 0");
  if (cfg.has("re_max") && !(cfg.real("re_max") >= cfg.real("re_min"))) violated("re_max must satisfy re_max >= re_min");
  if (cfg.has("im_max") && !(cfg.real("im_max") >= cfg.real("im_min"))) violated("im_max must satisfy im_max >= im_min");
  if (cfg.has("points_coarse") && !(cfg.integer("points_coarse") < cfg.integer("points")))
    violated("points_coarse must satisfy points_coarse < points");
}

}  // namespace csop::cli
