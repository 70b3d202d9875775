#include "anagram/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace anagram {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

}  // namespace

void write_records_csv(const std::string& path, const std::vector<IterationRecord>& records) {
    auto out = open_out(path);
    out << "# " << kRecordsVersion << "\n";
    out << "# generated " << timestamp() << "\n";
    out << kRecordsSchema << "\n";
    for (const auto& r : records) {
        out << r.t << ',' << fmt17(r.train_loss) << ',';
        if (r.rel_l2) out << fmt17(*r.rel_l2);
        out << ',' << r.r_min << ',' << r.r_max << ',' << r.r_int << ',' << r.r_eps << ','
            << r.elbow << ',' << fmt17(r.eta) << ',' << r.phase << "\n";
    }
}

void write_rce_curves_csv(const std::string& path, const std::vector<IterationRecord>& records) {
    auto out = open_out(path);
    out << "# anagram-rce v1\n";
    out << "iteration,N,rce,sigma\n";
    for (const auto& r : records) {
        for (int n = 0; n < r.rce.size(); ++n) {
            out << r.t << ',' << n << ',' << fmt17(r.rce[n]) << ',';
            if (n >= 1) out << fmt17(r.singular_values[n - 1]);
            out << "\n";
        }
    }
}

LoadedRecords read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    LoadedRecords loaded;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kRecordsSchema)
                throw std::runtime_error(path + ": unexpected records schema '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 10)
            throw std::runtime_error(path + ": malformed row '" + line + "'");
        IterationRecord r;
        r.t = std::stoi(fields[0]);
        r.train_loss = std::stod(fields[1]);
        if (!fields[2].empty()) r.rel_l2 = std::stod(fields[2]);
        r.r_min = std::stoi(fields[3]);
        r.r_max = std::stoi(fields[4]);
        r.r_int = std::stoi(fields[5]);
        r.r_eps = std::stoi(fields[6]);
        r.elbow = std::stoi(fields[7]);
        r.eta = std::stod(fields[8]);
        r.phase = fields[9];
        loaded.records.push_back(std::move(r));
    }

    // Optional sidecar with the stored curves.
    const auto slash = path.find_last_of('/');
    const std::string sidecar =
        (slash == std::string::npos ? "" : path.substr(0, slash + 1)) + "rce_curves.csv";
    std::ifstream side(sidecar);
    if (side) {
        std::map<int, std::vector<std::pair<double, double>>> curves;  // t -> (rce, sigma)
        bool head = false;
        while (std::getline(side, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!head) { head = true; continue; }
            const auto fields = split(line, ',');
            if (fields.size() < 3) continue;
            const int t = std::stoi(fields[0]);
            const double rce = std::stod(fields[2]);
            const double sigma =
                fields.size() >= 4 && !fields[3].empty() ? std::stod(fields[3]) : std::nan("");
            curves[t].emplace_back(rce, sigma);
        }
        for (auto& rec : loaded.records) {
            auto it = curves.find(rec.t);
            if (it == curves.end()) continue;
            const auto& pts = it->second;
            rec.rce.resize(static_cast<int>(pts.size()));
            rec.singular_values.resize(static_cast<int>(pts.size()) - 1);
            for (int n = 0; n < static_cast<int>(pts.size()); ++n) {
                rec.rce[n] = pts[n].first;
                if (n >= 1) rec.singular_values[n - 1] = pts[n].second;
            }
        }
    }
    return loaded;
}

void write_summary_json(const std::string& path, const RunSummary& summary) {
    nlohmann::json j;
    j["problem"] = summary.problem;
    j["seed"] = summary.seed;
    j["strategy"] = summary.strategy;
    j["final_mse"] = summary.final_mse;
    if (summary.final_rel_l2)
        j["final_rel_l2"] = *summary.final_rel_l2;
    else
        j["final_rel_l2"] = nullptr;
    j["iterations"] = summary.iterations;
    j["termination"] = summary.termination;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

RunSummary read_summary_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    nlohmann::json j;
    in >> j;
    RunSummary s;
    s.problem = j.at("problem").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.strategy = j.value("strategy", std::string{});
    s.final_mse = j.at("final_mse").get<double>();
    if (!j.at("final_rel_l2").is_null()) s.final_rel_l2 = j.at("final_rel_l2").get<double>();
    s.iterations = j.at("iterations").get<int>();
    s.termination = j.at("termination").get<std::string>();
    return s;
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    if (n == 0) return {0.0, 0.0};
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    if (n < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1))};
}

std::vector<SummaryRow> summarize(const std::vector<RunSummary>& summaries) {
    std::map<std::string, std::vector<const RunSummary*>> groups;
    for (const auto& s : summaries) groups[s.problem].push_back(&s);
    std::vector<SummaryRow> rows;
    for (const auto& [problem, members] : groups) {
        SummaryRow row;
        row.problem = problem;
        row.runs = static_cast<int>(members.size());
        std::vector<double> mses, l2s;
        for (const auto* s : members) {
            mses.push_back(s->final_mse);
            if (s->final_rel_l2) l2s.push_back(*s->final_rel_l2);
        }
        std::tie(row.mse_mean, row.mse_std) = mean_std(mses);
        std::tie(row.l2_mean, row.l2_std) = mean_std(l2s);
        rows.push_back(std::move(row));
    }
    return rows;  // std::map already orders by problem name
}

namespace {

std::string sci3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

}  // namespace

std::string render_table(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    constexpr const char* fmt = "%-22s %5s %12s %12s %12s %12s\n";
    char line[160];
    std::snprintf(line, sizeof(line), fmt, "problem", "runs", "mse_mean", "mse_std", "l2_mean",
                  "l2_std");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), fmt, r.problem.c_str(),
                      std::to_string(r.runs).c_str(), sci3(r.mse_mean).c_str(),
                      sci3(r.mse_std).c_str(), sci3(r.l2_mean).c_str(), sci3(r.l2_std).c_str());
        out << line;
    }
    return out.str();
}

std::string render_table_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "problem,runs,mse_mean,mse_std,l2_mean,l2_std\n";
    for (const auto& r : rows)
        out << r.problem << ',' << r.runs << ',' << sci3(r.mse_mean) << ',' << sci3(r.mse_std)
            << ',' << sci3(r.l2_mean) << ',' << sci3(r.l2_std) << "\n";
    return out.str();
}

}  // namespace anagram
