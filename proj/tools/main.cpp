#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kdvsol/deform.hpp"
#include "kdvsol/errors.hpp"
#include "kdvsol/io.hpp"
#include "kdvsol/ist.hpp"
#include "kdvsol/scatter.hpp"
#include "kdvsol/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Symmetric sampling grid with x = 0 an exact sample for odd point counts.
std::vector<double> sample_grid(double half_width, int points) {
    std::vector<double> xs(points);
    for (int i = 0; i < points; ++i)
        xs[i] = (2.0 * i - (points - 1)) * (half_width / (points - 1));
    return xs;
}

std::string join_ints(const std::vector<int>& vals, char sep) {
    std::string out;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(vals[i]);
    }
    return out;
}

std::string join_doubles(const std::vector<double>& vals, char sep) {
    std::string out;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out += sep;
        out += kdv::format_double(vals[i]);
    }
    return out;
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads, preserving the
// caller's index-based output ordering.
template <typename Fn>
void parallel_for(int count, int jobs, const Fn& fn) {
    const int workers = std::max(1, std::min(jobs, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto drain = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
}

struct DeformArgs {
    int h = 0;
    std::vector<int> v;
    double L = 15.0;
    int points = 2001;
    std::string out = ".";
};

int cmd_deform(const DeformArgs& a) {
    kdv::DeformationSpec spec{a.h, a.v};
    spec.validate();
    const kdv::AdmissibilityReport rep = kdv::check_nodeless(spec);

    fs::create_directories(a.out);
    json jrep = kdv::to_json(rep);
    jrep["h"] = spec.h;
    jrep["v"] = spec.v;
    kdv::write_text_file(a.out + "/admissibility.json", kdv::dump_json(jrep));
    std::printf("%s\n", rep.message.c_str());
    if (!rep.admissible) return 2;

    const kdv::PotentialModel model = spec.v.empty()
                                          ? kdv::PotentialModel::soliton(spec.h)
                                          : kdv::PotentialModel::deformed(spec);
    const auto xs = sample_grid(a.L, a.points);
    std::vector<double> us(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) us[i] = model(xs[i]);
    kdv::write_text_file(a.out + "/potential.csv", kdv::csv_two_columns("x,U", xs, us));
    std::printf("wrote %s/potential.csv and %s/admissibility.json\n", a.out.c_str(),
                a.out.c_str());
    return 0;
}

struct ScatterArgs {
    int h = 0;
    std::vector<int> v;
    std::string out = ".";
    std::string format = "structured";
};

int cmd_scatter(const ScatterArgs& a) {
    kdv::DeformationSpec spec{a.h, a.v};
    spec.validate();
    const kdv::AdmissibilityReport rep = kdv::check_nodeless(spec);
    if (!rep.admissible) {
        std::printf("%s\n", rep.message.c_str());
        return 2;
    }
    const kdv::ScatteringData data = kdv::scattering_data(spec);
    fs::create_directories(a.out);
    if (a.format == "csv") {
        kdv::write_text_file(a.out + "/scattering.csv",
                             kdv::csv_two_columns("kappa,norming", data.kappas, data.normings));
        std::printf("wrote %s/scattering.csv\n", a.out.c_str());
    } else {
        const std::string doc = kdv::dump_json(kdv::to_json(data));
        kdv::write_text_file(a.out + "/scattering.json", doc);
        std::fputs(doc.c_str(), stdout);
    }
    return 0;
}

struct EvolveArgs {
    int h = 0;
    std::vector<int> v;
    std::string data_path;
    std::vector<double> ts{0.0};
    double L = 15.0;
    int points = 2001;
    std::string out = ".";
    double x0 = 0.0;
    bool have_x0 = false;
    bool no_fallback = false;
    bool long_format = false;
};

int cmd_evolve(const EvolveArgs& a) {
    kdv::ScatteringData data;
    if (!a.data_path.empty()) {
        json j;
        try {
            j = json::parse(kdv::read_text_file(a.data_path));
        } catch (const json::exception& err) {
            throw kdv::IoFailure(std::string("cannot parse ") + a.data_path + ": " + err.what());
        }
        data = kdv::scattering_data_from_json(j);
    } else {
        kdv::DeformationSpec spec{a.h, a.v};
        spec.validate();
        const kdv::AdmissibilityReport rep = kdv::check_nodeless(spec);
        if (!rep.admissible) {
            std::printf("%s\n", rep.message.c_str());
            return 2;
        }
        data = kdv::scattering_data(spec);
    }

    auto eval = [&](double x, double t) {
        return a.no_fallback ? kdv::field_checked(data, x, t) : kdv::field(data, x, t);
    };

    if (a.have_x0) {
        std::string table = "t,u\n";
        for (double t : a.ts)
            table += kdv::format_double(t) + "," + kdv::format_double(eval(a.x0, t)) + "\n";
        std::fputs(table.c_str(), stdout);
        return 0;
    }

    fs::create_directories(a.out);
    const auto xs = sample_grid(a.L, a.points);
    json slices = json::array();
    std::vector<double> tl, xl, ul;
    for (std::size_t si = 0; si < a.ts.size(); ++si) {
        const double t = a.ts[si];
        std::vector<double> us(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) us[i] = eval(xs[i], t);
        char name[32];
        std::snprintf(name, sizeof(name), "slice_%03zu.csv", si);
        kdv::write_text_file(a.out + "/" + name, kdv::csv_two_columns("x,u", xs, us));
        slices.push_back(json{{"t", t}, {"file", name}});
        if (a.long_format) {
            for (std::size_t i = 0; i < xs.size(); ++i) {
                tl.push_back(t);
                xl.push_back(xs[i]);
                ul.push_back(us[i]);
            }
        }
    }

    std::vector<double> chis(data.kappas.size());
    for (std::size_t n = 0; n < chis.size(); ++n)
        chis[n] = kdv::phase_shift(data, static_cast<int>(n));
    json manifest{{"h", data.h},          {"v", data.v},
                  {"kappas", data.kappas}, {"normings", data.normings},
                  {"phase_shifts", chis},  {"slices", slices}};
    kdv::write_text_file(a.out + "/manifest.json", kdv::dump_json(manifest));
    if (a.long_format)
        kdv::write_text_file(a.out + "/long.csv", kdv::csv_three_columns("t,x,u", tl, xl, ul));
    std::printf("wrote %zu slice(s) and %s/manifest.json\n", a.ts.size(), a.out.c_str());
    return 0;
}

struct VerifyArgs {
    std::string only;
    double tol_scale = 1.0;
    int jobs = 1;
    std::string out = ".";
};

int cmd_verify(const VerifyArgs& a) {
    kdv::VerifyOptions opt;
    opt.only = a.only;
    opt.tol_scale = a.tol_scale;
    opt.jobs = a.jobs;
    const auto reports = kdv::run_verification(opt);

    int passed = 0;
    json checks = json::array();
    for (const auto& r : reports) {
        double worst = 0.0;
        for (double m : r.measured) worst = std::max(worst, m);
        std::printf("%s %s (worst %.3g, tolerance %.3g)\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), worst, r.tolerance);
        if (r.pass) ++passed;
        checks.push_back(kdv::to_json(r));
    }
    const int failed = static_cast<int>(reports.size()) - passed;
    std::printf("%d passed, %d failed\n", passed, failed);

    fs::create_directories(a.out);
    json doc{{"checks", checks}, {"passed", passed}, {"failed", failed}};
    kdv::write_text_file(a.out + "/verification.json", kdv::dump_json(doc));
    return failed == 0 ? 0 : 1;
}

struct SweepArgs {
    std::string family = "I";
    int h = -1;  // -1: use the family default
    std::vector<int> v;
    std::string out = ".";
    int jobs = 1;
};

int cmd_sweep(const SweepArgs& a) {
    std::vector<kdv::DeformationSpec> specs;
    if (a.family == "I") {
        const int h = a.h >= 0 ? a.h : 2;
        for (int v1 : {2, 4, 6, 8}) specs.push_back({h, {v1}});
    } else if (a.family == "II") {
        const int h = a.h >= 0 ? a.h : 1;
        for (int v1 : {2, 4})
            for (int gap : {3, 5, 7}) specs.push_back({h, {v1, v1 + gap}});
    } else if (a.family == "h0-twostep") {
        for (int v1 : {2, 4})
            for (int gap : {3, 5, 7}) specs.push_back({0, {v1, v1 + gap}});
    } else {  // custom
        if (a.v.empty())
            throw CLI::ValidationError("--class custom requires --v (and usually --h)");
        specs.push_back({std::max(a.h, 0), a.v});
    }

    struct Row {
        bool admissible = false;
        std::vector<double> kappas;
    };
    std::vector<Row> rows(specs.size());
    parallel_for(static_cast<int>(specs.size()), a.jobs, [&](int i) {
        specs[i].validate();
        rows[i].admissible = kdv::check_nodeless(specs[i]).admissible;
        if (rows[i].admissible) {
            for (const auto& level : kdv::spectrum(specs[i]))
                rows[i].kappas.push_back(level.kappa);
        }
    });

    std::string csv = "h,v,admissible,kappas\n";
    for (std::size_t i = 0; i < specs.size(); ++i) {
        csv += std::to_string(specs[i].h) + "," + join_ints(specs[i].v, ';') + ",";
        csv += rows[i].admissible ? "true" : "false";
        csv += "," + join_doubles(rows[i].kappas, ';') + "\n";
    }
    fs::create_directories(a.out);
    kdv::write_text_file(a.out + "/sweep.csv", csv);
    std::printf("wrote %s/sweep.csv (%zu rows)\n", a.out.c_str(), specs.size());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Darboux-deformed reflectionless potentials and their exact KdV soliton flows"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from a config file (flags override)");
    // --h is a domain flag on every subcommand, so help is --help only.
    app.set_help_flag("--help", "Print this help message and exit");
    auto add_subcommand = [&app](const char* name, const char* desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->set_help_flag("--help", "Print this help message and exit");
        return sub;
    };

    DeformArgs da;
    CLI::App* deform = add_subcommand("deform", "Build a deformed potential and its admissibility report");
    deform->add_option("--h", da.h, "Strength of the base potential -h(h+1)sech^2 x")
        ->required()
        ->check(CLI::NonNegativeNumber);
    deform->add_option("--v", da.v, "Deformation indices, comma separated")->delimiter(',');
    deform->add_option("--L", da.L, "Half-width of the output grid")->check(CLI::PositiveNumber);
    deform->add_option("--points", da.points, "Number of grid points")->check(CLI::Range(3, 10000001));
    deform->add_option("--out", da.out, "Output directory");

    ScatterArgs sa;
    CLI::App* scatter = add_subcommand("scatter", "Extract bound-state scattering data");
    scatter->add_option("--h", sa.h, "Strength of the base potential")->required()->check(CLI::NonNegativeNumber);
    scatter->add_option("--v", sa.v, "Deformation indices, comma separated")->delimiter(',');
    scatter->add_option("--out", sa.out, "Output directory");
    scatter->add_option("--format", sa.format, "Output format")
        ->check(CLI::IsMember({"csv", "structured"}));

    EvolveArgs ea;
    CLI::App* evolve = add_subcommand("evolve", "Evaluate the soliton field at requested times");
    evolve->add_option("--h", ea.h, "Strength of the base potential")->check(CLI::NonNegativeNumber);
    evolve->add_option("--v", ea.v, "Deformation indices, comma separated")->delimiter(',');
    CLI::Option* data_opt = evolve->add_option("--data", ea.data_path, "Scattering-data document to evolve");
    evolve->add_option("--t", ea.ts, "Time slices, comma separated")->delimiter(',');
    evolve->add_option("--L", ea.L, "Half-width of the output grid")->check(CLI::PositiveNumber);
    evolve->add_option("--points", ea.points, "Number of grid points")->check(CLI::Range(3, 10000001));
    evolve->add_option("--out", ea.out, "Output directory");
    CLI::Option* x0_opt = evolve->add_option("--x0", ea.x0, "Print t,u at this fixed x instead of writing slices");
    evolve->add_flag("--no-asymptotic-fallback", ea.no_fallback,
                     "Fail (exit 5) instead of using the asymptotic form outside the direct window");
    evolve->add_flag("--long", ea.long_format, "Also write a concatenated t,x,u table");
    CLI::Option* h_opt = evolve->get_option("--h");
    data_opt->excludes(h_opt);

    VerifyArgs va;
    CLI::App* verify = add_subcommand("verify", "Run the acceptance verification suite");
    verify->add_option("--only", va.only, "Run only checks whose name contains this substring");
    verify->add_option("--tol-scale", va.tol_scale, "Multiply every tolerance by this factor")
        ->check(CLI::PositiveNumber);
    verify->add_option("--jobs", va.jobs, "Concurrent checks")->check(CLI::Range(1, 256));
    verify->add_option("--out", va.out, "Output directory");

    SweepArgs wa;
    CLI::App* sweep = add_subcommand("sweep", "Enumerate a deformation family and test admissibility");
    sweep->add_option("--class", wa.family, "Family to enumerate")
        ->check(CLI::IsMember({"I", "II", "h0-twostep", "custom"}));
    sweep->add_option("--h", wa.h, "Base strength (family default if omitted)");
    sweep->add_option("--v", wa.v, "Indices for --class custom")->delimiter(',');
    sweep->add_option("--out", wa.out, "Output directory");
    sweep->add_option("--jobs", wa.jobs, "Concurrent rows")->check(CLI::Range(1, 256));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*deform) return cmd_deform(da);
        if (*scatter) return cmd_scatter(sa);
        if (*evolve) {
            ea.have_x0 = x0_opt->count() > 0;
            if (ea.data_path.empty() && h_opt->count() == 0)
                throw CLI::ValidationError("evolve needs --h/--v or --data");
            return cmd_evolve(ea);
        }
        if (*verify) return cmd_verify(va);
        if (*sweep) return cmd_sweep(wa);
    } catch (const CLI::ValidationError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return app.exit(err);
    } catch (const kdv::OutOfDirectWindow& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 5;
    } catch (const kdv::TailNotAsymptotic& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 4;
    } catch (const kdv::IoFailure& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    } catch (const fs::filesystem_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 3;
    } catch (const kdv::WronskianZero& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const kdv::NormalizationDiverges& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 70;
    }
    return 0;
}
