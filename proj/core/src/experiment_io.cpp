#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "esn/errors.hpp"
#include "esn/experiment.hpp"
#include "io_util.hpp"

namespace esn {

namespace {

using nlohmann::json;

const char* kRecordsHeader =
    "benchmark,n_s,size_index,alpha_index,trial,seed,alpha,eta,rho,nrmse,mmds,status";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = line.find(',', start);
        if (end == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, end - start));
        start = end + 1;
    }
    return fields;
}

double parse_double(const std::string& cell, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') {
        throw ParameterError(where + ": cannot parse number '" + cell + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& cell, const std::string& where) {
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(cell.c_str(), &end, 10);
    if (end == cell.c_str() || *end != '\0') {
        throw ParameterError(where + ": cannot parse integer '" + cell + "'");
    }
    return v;
}

}  // namespace

void write_records_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    detail::atomic_write(path, [&](std::ostream& out) {
        out << "# mmds_pairs=unordered mmds_window=last" << kMmdsWindowLength
            << " indices=1-based\n";
        out << kRecordsHeader << "\n";
        for (const auto& r : records) {
            out << r.benchmark << ',' << r.n_s << ',' << r.size_index << ',' << r.alpha_index
                << ',' << r.trial_index << ',' << r.seed << ','
                << detail::format_double(r.alpha) << ',' << detail::format_double(r.eta) << ','
                << detail::format_double(r.rho) << ',' << detail::format_double(r.nrmse) << ','
                << detail::format_double(r.mmds) << ',' << to_string(r.status) << '\n';
        }
    });
}

std::vector<SweepRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::vector<SweepRecord> records;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kRecordsHeader) {
                throw ParameterError(path + ": row " + std::to_string(row) +
                                     ": unexpected header '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 12) {
            throw ParameterError(path + ": row " + std::to_string(row) + ": expected 12 fields, got " +
                                 std::to_string(fields.size()));
        }
        const std::string where = path + ": row " + std::to_string(row);
        SweepRecord r;
        r.benchmark = fields[0];
        r.n_s = static_cast<std::size_t>(parse_u64(fields[1], where));
        r.size_index = static_cast<std::size_t>(parse_u64(fields[2], where));
        r.alpha_index = static_cast<std::size_t>(parse_u64(fields[3], where));
        r.trial_index = static_cast<std::size_t>(parse_u64(fields[4], where));
        r.seed = parse_u64(fields[5], where);
        r.alpha = parse_double(fields[6], where);
        r.eta = parse_double(fields[7], where);
        r.rho = parse_double(fields[8], where);
        r.nrmse = parse_double(fields[9], where);
        r.mmds = parse_double(fields[10], where);
        try {
            r.status = trial_status_from_string(fields[11]);
        } catch (const ParameterError& e) {
            throw ParameterError(where + ": " + e.what());
        }
        records.push_back(std::move(r));
    }
    if (!header_seen) throw ParameterError(path + ": missing header row");
    return records;
}

void write_surface_csv(const std::string& path, const SurfaceGrid& nrmse_surface,
                       const SurfaceGrid& mmds_surface) {
    if (nrmse_surface.sizes != mmds_surface.sizes ||
        nrmse_surface.k_alphas != mmds_surface.k_alphas) {
        throw ShapeError("write_surface_csv: surfaces disagree on axes");
    }
    detail::atomic_write(path, [&](std::ostream& out) {
        out << "n_s,alpha_index,mean_nrmse,mean_mmds,valid_count\n";
        for (std::size_t si = 0; si < nrmse_surface.sizes.size(); ++si) {
            for (std::size_t aj = 0; aj < nrmse_surface.k_alphas; ++aj) {
                const std::size_t cell = si * nrmse_surface.k_alphas + aj;
                out << nrmse_surface.sizes[si] << ',' << (aj + 1) << ','
                    << detail::format_double(nrmse_surface.mean[cell]) << ','
                    << detail::format_double(mmds_surface.mean[cell]) << ','
                    << nrmse_surface.count[cell] << '\n';
            }
        }
    });
}

void write_surface_matrix(const std::string& path, const SurfaceGrid& surface) {
    detail::atomic_write(path, [&](std::ostream& out) {
        out << "# rows: reservoir sizes; columns: alpha_index 1.." << surface.k_alphas << "\n";
        out << "# sizes:";
        for (std::size_t s : surface.sizes) out << ' ' << s;
        out << "\n";
        for (std::size_t si = 0; si < surface.sizes.size(); ++si) {
            for (std::size_t aj = 0; aj < surface.k_alphas; ++aj) {
                if (aj) out << ' ';
                out << detail::format_double(surface.mean[si * surface.k_alphas + aj]);
            }
            out << '\n';
        }
    });
}

SweepPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json doc;
    try {
        in >> doc;
        SweepPlan plan;
        plan.benchmark = doc.at("benchmark").get<std::string>();
        plan.sizes = doc.at("sizes").get<std::vector<std::size_t>>();
        plan.k_alphas = doc.at("k_alphas").get<std::size_t>();
        plan.n_trials = doc.at("n_trials").get<std::size_t>();
        plan.gamma = doc.at("gamma").get<double>();
        plan.washout = doc.at("washout").get<std::size_t>();
        plan.eval_mode = eval_mode_from_string(doc.at("eval_mode").get<std::string>());
        plan.free_run_horizon = doc.at("free_run_horizon").get<std::size_t>();
        plan.base_seed = doc.at("base_seed").get<std::uint64_t>();
        return plan;
    } catch (const json::exception& e) {
        throw ParameterError(path + ": malformed plan: " + e.what());
    }
}

void save_plan(const std::string& path, const SweepPlan& plan) {
    const json doc{
        {"benchmark", plan.benchmark},
        {"sizes", plan.sizes},
        {"k_alphas", plan.k_alphas},
        {"n_trials", plan.n_trials},
        {"gamma", plan.gamma},
        {"washout", plan.washout},
        {"eval_mode", to_string(plan.eval_mode)},
        {"free_run_horizon", plan.free_run_horizon},
        {"base_seed", plan.base_seed},
    };
    detail::atomic_write(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

}  // namespace esn
