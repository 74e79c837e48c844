#include "kdvsol/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kdvsol/errors.hpp"

namespace kdv {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string csv_two_columns(const std::string& header, const std::vector<double>& a,
                            const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("csv_two_columns: column size mismatch");
    std::string out = header + "\n";
    for (std::size_t i = 0; i < a.size(); ++i)
        out += format_double(a[i]) + "," + format_double(b[i]) + "\n";
    return out;
}

std::string csv_three_columns(const std::string& header, const std::vector<double>& a,
                              const std::vector<double>& b, const std::vector<double>& c) {
    if (a.size() != b.size() || a.size() != c.size())
        throw std::invalid_argument("csv_three_columns: column size mismatch");
    std::string out = header + "\n";
    for (std::size_t i = 0; i < a.size(); ++i)
        out += format_double(a[i]) + "," + format_double(b[i]) + "," + format_double(c[i]) + "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoFailure("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw IoFailure("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoFailure("cannot open for reading: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    if (f.bad()) throw IoFailure("read failed: " + path);
    return os.str();
}

std::string dump_json(const nlohmann::json& j) {
    return j.dump(2) + "\n";
}

nlohmann::json to_json(const ScatteringData& data) {
    return nlohmann::json{{"h", data.h},
                          {"v", data.v},
                          {"kappas", data.kappas},
                          {"normings", data.normings},
                          {"reflectionless", data.reflectionless}};
}

ScatteringData scattering_data_from_json(const nlohmann::json& j) {
    try {
        ScatteringData d;
        d.h = j.at("h").get<int>();
        d.v = j.value("v", std::vector<int>{});
        d.kappas = j.at("kappas").get<std::vector<double>>();
        d.normings = j.at("normings").get<std::vector<double>>();
        d.reflectionless = j.value("reflectionless", true);
        if (d.kappas.size() != d.normings.size())
            throw IoFailure("scattering data: kappas and normings differ in length");
        return d;
    } catch (const nlohmann::json::exception& err) {
        throw IoFailure(std::string("scattering data: ") + err.what());
    }
}

nlohmann::json to_json(const AdmissibilityReport& report) {
    nlohmann::json j{{"admissible", report.admissible},
                     {"node_at_origin", report.node_at_origin},
                     {"min_ratio", report.min_ratio},
                     {"half_width", report.half_width},
                     {"samples", report.samples},
                     {"message", report.message}};
    if (!report.admissible) {
        j["bracket"] = {report.bracket_lo, report.bracket_hi};
    } else {
        j["bracket"] = nullptr;
    }
    return j;
}

nlohmann::json to_json(const VerificationReport& report) {
    return nlohmann::json{{"name", report.name},
                          {"measured", report.measured},
                          {"tolerance", report.tolerance},
                          {"pass", report.pass},
                          {"parameters", report.parameters}};
}

} // namespace kdv
