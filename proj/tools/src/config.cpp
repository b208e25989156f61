#include "cars_cli/config.hpp"

#include <fstream>
#include <sstream>

#include "cars/diagnostics.hpp"

namespace cars::cli {
namespace {

std::string type_name(const Json& j) {
  if (j.is_number_integer()) return "integer";
  return j.type_name();
}

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) {
  throw ConfigError((ptr.empty() ? std::string("/") : ptr) + ": " + msg);
}

Json merge(const Json& schema, const Json& user, const std::string& ptr);

Json merge_object(const Json& schema, const Json& user, const std::string& ptr) {
  if (!user.is_object()) fail(ptr, "expected an object, got " + type_name(user));
  Json out = schema;
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string child = ptr + "/" + it.key();
    if (!schema.contains(it.key())) fail(child, "unknown key");
    out[it.key()] = merge(schema[it.key()], it.value(), child);
  }
  return out;
}

Json merge_beams(const Json& schema, const Json& user, const std::string& ptr) {
  if (!user.is_array()) fail(ptr, "expected an array of 3 beams, got " + type_name(user));
  if (user.size() != schema.size())
    fail(ptr, "expected 3 beams (pump_high, pump_stokes, probe), got " +
                  std::to_string(user.size()));
  Json out = Json::array();
  for (std::size_t i = 0; i < user.size(); ++i)
    out.push_back(merge_object(schema[i], user[i], ptr + "/" + std::to_string(i)));
  return out;
}

Json merge_elements(const Json& user, const std::string& ptr) {
  if (!user.is_array() || user.empty()) fail(ptr, "expected a non-empty array of elements");
  const Json element_schema = {{"name", ""}, {"transmission", 1.0}};
  Json out = Json::array();
  for (std::size_t i = 0; i < user.size(); ++i) {
    const std::string child = ptr + "/" + std::to_string(i);
    if (user[i].is_object() && !user[i].contains("transmission"))
      fail(child + "/transmission", "required key missing");
    Json e = merge_object(element_schema, user[i], child);
    if (e["name"].get<std::string>().empty()) e["name"] = "element " + std::to_string(i);
    out.push_back(std::move(e));
  }
  return out;
}

Json merge_nullable_number(const Json& user, const std::string& ptr) {
  if (user.is_null()) return user;
  if (!user.is_number()) fail(ptr, "expected a number or null, got " + type_name(user));
  return user;
}

Json merge_calibration(const Json& user, const std::string& ptr) {
  if (user.is_null()) return user;
  const Json schema = {{"eta", 0.0}, {"at_bar", 0.0}};
  for (const char* key : {"eta", "at_bar"})
    if (user.is_object() && !user.contains(key))
      fail(ptr + "/" + key, "required key missing");
  return merge_object(schema, user, ptr);
}

Json merge(const Json& schema, const Json& user, const std::string& ptr) {
  if (ptr == "/beams") return merge_beams(schema, user, ptr);
  if (ptr == "/detection/elements") return merge_elements(user, ptr);
  if (ptr == "/model/signal_waist_um") return merge_nullable_number(user, ptr);
  if (ptr == "/calibration") return merge_calibration(user, ptr);
  if (schema.is_object()) return merge_object(schema, user, ptr);
  if (schema.is_number_unsigned()) {
    if (!user.is_number_unsigned())
      fail(ptr, "expected a non-negative integer, got " + type_name(user));
    return user;
  }
  if (schema.is_number_integer()) {
    if (!user.is_number_integer()) fail(ptr, "expected an integer, got " + type_name(user));
    return user;
  }
  if (schema.is_number()) {
    if (!user.is_number()) fail(ptr, "expected a number, got " + type_name(user));
    return user;
  }
  if (schema.is_string()) {
    if (!user.is_string()) fail(ptr, "expected a string, got " + type_name(user));
    return user;
  }
  fail(ptr, "unsupported value");
}

double number(const Json& doc, const std::string& ptr) {
  return doc.at(Json::json_pointer(ptr)).get<double>();
}

double positive(const Json& doc, const std::string& ptr) {
  const double v = number(doc, ptr);
  if (!(v > 0.0)) fail(ptr, "must be positive");
  return v;
}

double non_negative(const Json& doc, const std::string& ptr) {
  const double v = number(doc, ptr);
  if (!(v >= 0.0)) fail(ptr, "must be non-negative");
  return v;
}

}  // namespace

Json default_config_json() {
  Json beams = Json::array();
  beams.push_back({{"wavelength_nm", 938.0},
                   {"waist_um", 70.0},
                   {"focus_mm", 0.0},
                   {"power_W", 0.5},
                   {"pol_deg", 45.0}});
  beams.push_back({{"wavelength_nm", 1538.0},
                   {"waist_um", 70.0},
                   {"focus_mm", 0.0},
                   {"power_W", 15.0},
                   {"pol_deg", 45.0}});
  beams.push_back({{"wavelength_nm", 434.0},
                   {"waist_um", 70.0},
                   {"focus_mm", 0.0},
                   {"power_W", 3e-3},
                   {"pol_deg", 0.0}});

  Json elements = Json::array();
  for (const auto& e : default_chain())
    elements.push_back({{"name", e.name}, {"transmission", e.transmission}});

  const DispersionModel::Coefficients c;
  const ResonanceParams r;
  const DetectorSpec d;
  const DetectionParams p;
  return Json{
      {"gas",
       {{"coefficients",
         {{"a1", c.a1}, {"b1", c.b1}, {"a2", c.a2}, {"b2", c.b2}, {"scale", c.scale}}},
        {"temperature_K", 293.15}}},
      {"cell", {{"length_m", 0.140}}},
      {"beams", beams},
      {"quadruple", {{"direction", "up"}}},
      {"resonance",
       {{"nu0_THz", r.nu0.value()},
        {"shift_MHz_per_bar", r.shift_mhz_per_bar},
        {"fwhm_MHz_per_bar", r.broadening_mhz_per_bar},
        {"natural_MHz", r.natural_width_mhz},
        {"detuning_MHz", 0.0}}},
      {"detection",
       {{"elements", elements},
        {"qe", d.quantum_efficiency},
        {"dark_cps", d.dark_rate_cps},
        {"drift", d.drift_fraction}}},
      {"polarization",
       {{"pbs_extinction", p.pbs_extinction},
        {"pmt_ratio", p.pmt_eff_ratio},
        {"prep_error_deg", p.prep_error_deg}}},
      {"model",
       {{"signal_waist_um", nullptr}, {"density_exponent", 1}, {"conjugation", "physical"}}},
      {"calibration", nullptr},
      {"seed", std::uint64_t{1}},
  };
}

RunConfig resolve_config(const Json& user) {
  RunConfig rc;
  rc.resolved = merge(default_config_json(), user, "");
  const Json& doc = rc.resolved;

  rc.coefficients.a1 = number(doc, "/gas/coefficients/a1");
  rc.coefficients.b1 = number(doc, "/gas/coefficients/b1");
  rc.coefficients.a2 = number(doc, "/gas/coefficients/a2");
  rc.coefficients.b2 = number(doc, "/gas/coefficients/b2");
  rc.coefficients.scale = positive(doc, "/gas/coefficients/scale");
  rc.temperature_k = positive(doc, "/gas/temperature_K");
  rc.cell_length_m = positive(doc, "/cell/length_m");

  for (std::size_t i = 0; i < 3; ++i) {
    const std::string b = "/beams/" + std::to_string(i);
    rc.beams[i].wavelength_nm = positive(doc, b + "/wavelength_nm");
    rc.beams[i].waist_um = positive(doc, b + "/waist_um");
    rc.beams[i].focus_mm = number(doc, b + "/focus_mm");
    rc.beams[i].power_w = non_negative(doc, b + "/power_W");
    rc.beams[i].pol_deg = number(doc, b + "/pol_deg");
  }

  const auto dir = doc["quadruple"]["direction"].get<std::string>();
  try {
    rc.direction = parse_direction(dir);
  } catch (const DomainError&) {
    fail("/quadruple/direction", "expected \"up\" or \"down\", got \"" + dir + "\"");
  }

  rc.resonance.nu0 = Frequency(positive(doc, "/resonance/nu0_THz"));
  rc.resonance.shift_mhz_per_bar = number(doc, "/resonance/shift_MHz_per_bar");
  rc.resonance.broadening_mhz_per_bar = positive(doc, "/resonance/fwhm_MHz_per_bar");
  rc.resonance.natural_width_mhz = non_negative(doc, "/resonance/natural_MHz");
  rc.detuning_mhz = number(doc, "/resonance/detuning_MHz");

  const auto& elements = doc["detection"]["elements"];
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string ptr = "/detection/elements/" + std::to_string(i) + "/transmission";
    const double t = number(doc, ptr);
    if (!(t > 0.0 && t <= 1.0)) fail(ptr, "must lie in (0, 1]");
    rc.elements.push_back({elements[i]["name"].get<std::string>(), t});
  }
  rc.detector.quantum_efficiency = positive(doc, "/detection/qe");
  if (rc.detector.quantum_efficiency > 1.0) fail("/detection/qe", "must lie in (0, 1]");
  rc.detector.dark_rate_cps = non_negative(doc, "/detection/dark_cps");
  rc.detector.drift_fraction = non_negative(doc, "/detection/drift");
  if (rc.detector.drift_fraction >= 1.0) fail("/detection/drift", "must lie in [0, 1)");

  rc.polarization.pbs_extinction = number(doc, "/polarization/pbs_extinction");
  if (!(rc.polarization.pbs_extinction > 1.0))
    fail("/polarization/pbs_extinction", "must exceed 1");
  rc.polarization.pmt_eff_ratio = positive(doc, "/polarization/pmt_ratio");
  rc.polarization.prep_error_deg = number(doc, "/polarization/prep_error_deg");

  if (!doc["model"]["signal_waist_um"].is_null())
    rc.signal_waist_um = positive(doc, "/model/signal_waist_um");
  rc.density_exponent = doc["model"]["density_exponent"].get<int>();
  if (rc.density_exponent != 1 && rc.density_exponent != 2)
    fail("/model/density_exponent", "must be 1 or 2");
  const auto conj = doc["model"]["conjugation"].get<std::string>();
  if (conj == "literal")
    rc.literal_conjugation = true;
  else if (conj != "physical")
    fail("/model/conjugation", "expected \"physical\" or \"literal\", got \"" + conj + "\"");

  if (!doc["calibration"].is_null())
    rc.calibration = CalibrationConfig{positive(doc, "/calibration/eta"),
                                       positive(doc, "/calibration/at_bar")};
  rc.seed = doc["seed"].get<std::uint64_t>();
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  Json user;
  try {
    user = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return resolve_config(user);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

RunConfig default_run_config() { return resolve_config(Json::object()); }

ConversionConfig conversion_config(const RunConfig& rc) {
  auto beam = [](const BeamConfig& b) {
    BeamSpec s;
    s.waist_m = b.waist_um * 1e-6;
    s.focus_m = b.focus_mm * 1e-3;
    s.lambda = Wavelength(b.wavelength_nm);
    s.power = Power(b.power_w);
    s.polarization_deg = b.pol_deg;
    return s;
  };
  try {
    const auto q = make_quadruple(Wavelength(rc.beams[2].wavelength_nm),
                                  Wavelength(rc.beams[0].wavelength_nm),
                                  Wavelength(rc.beams[1].wavelength_nm), rc.direction);
    ConversionConfig c(q);
    c.pump_high = beam(rc.beams[0]);
    c.pump_stokes = beam(rc.beams[1]);
    c.probe = beam(rc.beams[2]);
    if (rc.signal_waist_um) c.signal_waist_m = *rc.signal_waist_um * 1e-6;
    c.cell_length_m = rc.cell_length_m;
    c.temperature = Temperature(rc.temperature_k);
    c.dispersion = DispersionModel(rc.coefficients);
    c.resonance = rc.resonance;
    c.detuning_mhz = rc.detuning_mhz;
    c.density_exponent = rc.density_exponent;
    if (rc.literal_conjugation) c.conjugation = kLiteralPattern;
    c.validate();
    if (rc.calibration)
      c = calibrate(c, rc.calibration->eta, Pressure(rc.calibration->at_bar));
    return c;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("/: ") + e.what());
  }
}

}  // namespace cars::cli
