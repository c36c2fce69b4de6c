#include "homsys/model_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "homsys/errors.hpp"

namespace homsys {

using nlohmann::json;

json to_json(const HFunction& f) {
    const auto& g = f.g();
    json j;
    switch (g.kind()) {
        case GFunction::Kind::zero:
            j["family"] = f.eps() > 0 ? "max" : "min";
            break;
        case GFunction::Kind::softplus:
            if (g.scale() == 1.0) {
                j["family"] = f.eps() > 0 ? "sum" : "parallel";
            } else {
                j["family"] = "power_mean";
                j["alpha"] = f.eps() * g.scale();
            }
            break;
        case GFunction::Kind::tent:
            if (g.s_plus() == 1.0 && g.s_minus() == 1.0) {
                j["family"] = f.eps() > 0 ? "hipster+" : "hipster-";
            } else {
                j["family"] = "tent";
                j["s_plus"] = g.s_plus();
                j["s_minus"] = g.s_minus();
                j["eps"] = f.eps();
            }
            break;
        case GFunction::Kind::table:
            j["family"] = "table";
            j["eps"] = f.eps();
            j["lo"] = g.lo();
            j["hi"] = g.hi();
            j["values"] = g.values();
            break;
    }
    return j;
}

HFunction function_from_json(const json& j) {
    try {
        const std::string fam = j.at("family").get<std::string>();
        if (fam == "sum") return fns::sum();
        if (fam == "parallel") return fns::parallel();
        if (fam == "max") return fns::max();
        if (fam == "min") return fns::min();
        if (fam == "hipster+") return fns::hipster_plus();
        if (fam == "hipster-") return fns::hipster_minus();
        if (fam == "power_mean") return fns::power_mean(j.at("alpha").get<double>());
        const int eps = j.value("eps", 1);
        if (fam == "tent") return fns::tent(j.at("s_plus").get<double>(), j.at("s_minus").get<double>(), eps);
        if (fam == "table") {
            auto g = GFunction::table(j.at("lo").get<double>(), j.at("hi").get<double>(),
                                      j.at("values").get<std::vector<double>>());
            return from_g(g, eps, "table");
        }
        throw DomainError("unknown family '" + fam + "'");
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed function spec: ") + e.what());
    }
}

json to_json(const ModelSpec& m) {
    json atoms = json::array();
    for (const auto& a : m.atoms) {
        json j = to_json(a.f);
        j["weight"] = a.weight;
        atoms.push_back(std::move(j));
    }
    return {{"name", m.name}, {"atoms", atoms}};
}

ModelSpec model_from_json(const json& j) {
    ModelSpec m;
    try {
        m.name = j.value("name", std::string("custom"));
        for (const auto& a : j.at("atoms")) m.atoms.push_back({a.at("weight").get<double>(), function_from_json(a)});
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed model spec: ") + e.what());
    }
    m.check();
    return m;
}

ModelSpec load_model(const std::string& spec) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(spec, ec)) {
        std::ifstream in(spec);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw DomainError("cannot parse model file " + spec + ": " + e.what());
        }
        return model_from_json(j);
    }
    return builtin(spec);
}

std::string model_hash(const ModelSpec& m) {
    const std::string text = to_json(m).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace homsys
