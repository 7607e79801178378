#include "parmod/io.hpp"

#include <sstream>

#include <json.hpp>

#include "parmod/errors.hpp"
#include "parmod/version.hpp"

namespace parmod {

namespace {

using nlohmann::json;

json cx(cplx v) { return json::array({v.real(), v.imag()}); }

cplx as_cx(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InconsistentInput(std::string("json: field '") + field +
                                "' is not an [re, im] pair");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

const json& need(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end())
        throw InconsistentInput(std::string("json: missing field '") + field + "'");
    return *it;
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InconsistentInput(std::string("json: ") + e.what());
    }
}

json mode_table(const std::map<int, cplx>& modes) {
    json out = json::object();
    for (const auto& [k, v] : modes) out[std::to_string(k)] = cx(v);
    return out;
}

std::map<int, cplx> modes_from(const json& j, const char* field) {
    std::map<int, cplx> out;
    if (!j.is_object())
        throw InconsistentInput(std::string("json: '") + field + "' is not an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        out[std::stoi(it.key())] = as_cx(it.value(), field);
    return out;
}

} // namespace

std::string horn_map_to_json(const HornMapPair& h) {
    json j;
    j["Y0"] = h.Y0;
    j["M0"] = h.M0;
    j["Minf"] = h.Minf;
    j["a"] = cx(h.a);
    j["b"] = mode_table(h.b);
    j["c"] = mode_table(h.c);
    j["const0"] = cx(h.const0);
    j["const_inf_dev"] = cx(h.const_inf_dev);
    j["margin"] = h.margin;
    j["residual"] = h.residual;
    return j.dump(2);
}

HornMapPair horn_map_from_json(const std::string& text) {
    const json j = parse(text);
    HornMapPair h;
    h.Y0 = need(j, "Y0").get<double>();
    h.M0 = need(j, "M0").get<double>();
    h.Minf = need(j, "Minf").get<double>();
    h.a = as_cx(need(j, "a"), "a");
    h.b = modes_from(need(j, "b"), "b");
    h.c = modes_from(need(j, "c"), "c");
    h.const0 = as_cx(need(j, "const0"), "const0");
    h.const_inf_dev = as_cx(need(j, "const_inf_dev"), "const_inf_dev");
    h.margin = need(j, "margin").get<double>();
    h.residual = need(j, "residual").get<double>();
    return h;
}

std::string moebius_to_json(const MoebiusModulus& m) {
    json j;
    j["A"] = cx(m.A);
    j["B"] = cx(m.B);
    j["a"] = cx(m.a);
    j["n"] = m.n;
    j["nprime"] = m.nprime;
    return j.dump(2);
}

MoebiusModulus moebius_from_json(const std::string& text) {
    const json j = parse(text);
    MoebiusModulus m;
    m.A = as_cx(need(j, "A"), "A");
    m.B = as_cx(need(j, "B"), "B");
    m.a = as_cx(need(j, "a"), "a");
    m.n = need(j, "n").get<int>();
    m.nprime = need(j, "nprime").get<int>();
    if (m.n < 1 || m.nprime < 1)
        throw InconsistentInput("moebius_from_json: degrees must be positive");
    return m;
}

std::string riccati_system_to_json(const RiccatiSystem& sys) {
    json j;
    j["a"] = cx(sys.a);
    j["c"] = cx(sys.c);
    j["d"] = cx(sys.d);
    j["y0"] = sys.y0;
    return j.dump(2);
}

GermFamily family_from_json(const std::string& text) {
    const json j = parse(text);
    if (j.contains("builtin")) {
        const std::string kind = j["builtin"].get<std::string>();
        if (kind == "model") {
            const cplx a = j.contains("a") ? as_cx(j["a"], "a") : cplx(0.0);
            return model_family(a);
        }
        if (kind == "quadratic") return quadratic_family();
        throw InconsistentInput("family_from_json: unknown builtin '" + kind + "'");
    }
    if (!j.contains("series"))
        throw InconsistentInput("family_from_json: need 'builtin' or 'series'");
    std::vector<std::vector<cplx>> rows;
    for (const auto& row : need(j, "series")) {
        std::vector<cplx> r;
        for (const auto& e : row) r.push_back(as_cx(e, "series"));
        rows.push_back(std::move(r));
    }
    GermFamily g = family_from_coeffs(std::move(rows));
    if (j.contains("z_radius")) g.z_radius = j["z_radius"].get<double>();
    return g;
}

std::string compat_report_to_json(const CompatReport& r) {
    json j;
    j["D"] = cx(r.D);
    j["Dprime"] = cx(r.Dprime);
    j["compatible"] = r.compatible;
    j["gamma"] = cx(r.gamma);
    j["residual"] = r.residual;
    j["tol"] = r.tol;
    return j.dump(2);
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i)
        os << header[i] << (i + 1 < header.size() ? "," : "\n");
    os.precision(17);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw InconsistentInput("csv_table: row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
    return os.str();
}

std::string report_envelope(const std::string& tool,
                            const std::map<std::string, double>& tolerances,
                            const std::string& payload_json) {
    json j;
    j["payload"] = parse(payload_json);
    j["tolerances"] = json::object();
    for (const auto& [k, v] : tolerances) j["tolerances"][k] = v;
    j["tool"] = tool;
    j["version"] = PARMOD_VERSION;
    return j.dump(2) + "\n";
}

} // namespace parmod
