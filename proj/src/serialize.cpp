#include "fvault/serialize.hpp"

#include <json.hpp>

namespace fvault {

using nlohmann::json;

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError("JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

const json& member(const json& obj, const char* key) {
  if (!obj.is_object()) throw FormatError("$: expected a JSON object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(std::string("$.") + key + ": missing field");
  return *it;
}

int int_member(const json& obj, const char* key) {
  const json& v = member(obj, key);
  if (!v.is_number_integer()) throw FormatError(std::string("$.") + key + ": expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < 0 || x > (1 << 24)) throw FormatError(std::string("$.") + key + ": value out of range");
  return static_cast<int>(x);
}

std::vector<Elem> hex_array(const Field& f, const json& arr, const std::string& path) {
  if (!arr.is_array()) throw FormatError(path + ": expected an array of hex strings");
  std::vector<Elem> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    if (!arr[i].is_string()) throw FormatError(at + ": expected a hex string");
    try {
      out.push_back(f.from_hex(arr[i].get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw FormatError(at + ": " + e.what());
    }
  }
  return out;
}

std::shared_ptr<const Field> field_for(int bits, const char* key) {
  if (bits < kMinFieldBits || bits > kMaxFieldBits) {
    throw FormatError(std::string("$.") + key + ": field degree must be in [2, 24]");
  }
  return Field::get(bits);
}

json hex_json(const Field& f, std::span<const Elem> xs) {
  json arr = json::array();
  for (Elem x : xs) arr.push_back(f.to_hex(x));
  return arr;
}

}  // namespace

std::string serialize(const VaultRecord& rec) {
  validate(rec);
  json j;
  j["variant"] = variant_name(rec.variant);
  j["m_bits"] = rec.m_bits;
  if (rec.variant == Variant::kBlended) j["ext_m_bits"] = rec.ext_m_bits;
  j["t"] = rec.t;
  j["k"] = rec.k;
  if (rec.variant == Variant::kBlended) j["blend_size"] = rec.blend_size;
  j["coeffs"] = hex_json(*Field::get(rec.field_bits()), rec.coeffs);
  return j.dump(2) + "\n";
}

VaultRecord deserialize(std::string_view text) {
  const json j = parse(text);
  VaultRecord rec;
  const json& var = member(j, "variant");
  if (!var.is_string()) throw FormatError("$.variant: expected a string");
  const auto name = var.get<std::string>();
  if (name == "probabilistic") {
    rec.variant = Variant::kProbabilistic;
  } else if (name == "deterministic") {
    rec.variant = Variant::kDeterministic;
  } else if (name == "blended") {
    rec.variant = Variant::kBlended;
  } else {
    throw FormatError("$.variant: unknown variant \"" + name + "\"");
  }
  rec.m_bits = int_member(j, "m_bits");
  field_for(rec.m_bits, "m_bits");
  rec.t = int_member(j, "t");
  rec.k = int_member(j, "k");
  if (rec.variant == Variant::kBlended) {
    rec.ext_m_bits = int_member(j, "ext_m_bits");
    rec.blend_size = int_member(j, "blend_size");
  } else if (j.contains("ext_m_bits") || j.contains("blend_size")) {
    throw FormatError("$: blending fields are only allowed on blended records");
  }
  const auto f = field_for(rec.field_bits(), rec.variant == Variant::kBlended ? "ext_m_bits" : "m_bits");
  rec.coeffs = hex_array(*f, member(j, "coeffs"), "$.coeffs");
  try {
    validate(rec);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("$: ") + e.what());
  }
  return rec;
}

std::string serialize_features(const Field& f, const FeatureSet& a) {
  for (Elem x : a) f.element(x);
  json j;
  j["m_bits"] = f.bits();
  j["elements"] = hex_json(f, a.elements());
  return j.dump(2) + "\n";
}

TaggedFeatureSet deserialize_features(std::string_view text) {
  const json j = parse(text);
  TaggedFeatureSet out;
  out.m_bits = int_member(j, "m_bits");
  const auto f = field_for(out.m_bits, "m_bits");
  try {
    out.elements = FeatureSet(hex_array(*f, member(j, "elements"), "$.elements"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("$.elements: ") + e.what());
  }
  return out;
}

std::string serialize_poly(const Field& f, const Poly& p) { return hex_json(f, p.coeffs()).dump(); }

Poly deserialize_poly(const Field& f, std::string_view text) {
  return Poly(hex_array(f, parse(text), "$"));
}

}  // namespace fvault
