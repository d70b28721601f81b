#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "waveop/config.hpp"

namespace waveop {

namespace detail {

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Staged artifact directory: files accumulate in a hidden staging area and
/// appear at the final path only when commit() runs, so a failed run never
/// leaves partial output.
class ArtifactDir {
public:
    ArtifactDir(std::filesystem::path final_dir, const ExperimentConfig& cfg,
                std::string subcommand)
        : final_(std::move(final_dir)),
          staging_(final_.string() + ".staging"),
          cfg_(cfg),
          subcommand_(std::move(subcommand)) {
        std::filesystem::remove_all(staging_);
        std::filesystem::create_directories(staging_);
    }

    ~ArtifactDir() {
        if (!committed_) {
            std::error_code ec;
            std::filesystem::remove_all(staging_, ec);
        }
    }

    void write_text(const std::string& name, const std::string& content) {
        std::ofstream out(staging_ / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write artifact " + name);
        out << content;
        files_.push_back(name);
    }

    void write_csv(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
        std::string s;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c) s += ",";
            s += header[c];
        }
        s += "\n";
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) s += ",";
                s += detail::csv_num(row[c]);
            }
            s += "\n";
        }
        write_text(name, s);
    }

    void write_json(const std::string& name, const nlohmann::json& j) {
        write_text(name, j.dump(2) + "\n");
    }

    nlohmann::json base_json() const {
        nlohmann::json j;
        j["tool"] = "waveop";
        j["version"] = tool_version;
        j["config_hash"] = config_hash(cfg_);
        return j;
    }

    /// Simple static SVG: one polyline over labeled axes.
    void write_curve_svg(const std::string& name, const std::string& title,
                         const std::vector<double>& xs, const std::vector<double>& ys) {
        const int W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
        double xmin = xs.front(), xmax = xs.front(), ymin = ys.front(), ymax = ys.front();
        for (double v : xs) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
        for (double v : ys) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
        if (xmax == xmin) xmax = xmin + 1.0;
        if (ymax == ymin) ymax = ymin + 1.0;
        ymin = std::min(ymin, 0.0);
        auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
        auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
        std::string s;
        s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) +
             "\" height=\"" + std::to_string(H) + "\">\n";
        s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        s += "<text x=\"" + std::to_string(W / 2) + "\" y=\"24\" text-anchor=\"middle\" "
             "font-family=\"monospace\" font-size=\"14\">" + title + "</text>\n";
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", ml,
                      H - mb, W - mr, H - mb);
        s += buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", ml, mt,
                      ml, H - mb);
        s += buf;
        for (int i = 0; i <= 4; ++i) {
            const double xv = xmin + (xmax - xmin) * i / 4.0;
            const double yv = ymin + (ymax - ymin) * i / 4.0;
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\" font-family=\"monospace\" "
                          "font-size=\"11\">%.4g</text>\n",
                          px(xv), H - mb + 18, xv);
            s += buf;
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%d\" y=\"%.1f\" text-anchor=\"end\" font-family=\"monospace\" "
                          "font-size=\"11\">%.4g</text>\n",
                          ml - 6, py(yv) + 4, yv);
            s += buf;
        }
        s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(xs[i]), py(ys[i]));
            s += buf;
        }
        s += "\"/>\n";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"steelblue\"/>\n", px(xs[i]),
                          py(ys[i]));
            s += buf;
        }
        s += "</svg>\n";
        write_text(name, s);
    }

    /// Writes the manifest and the canonical config copy, then atomically
    /// replaces the final directory with the staged one.
    void commit() {
        write_text("config.txt", cfg_.canonical_text());
        nlohmann::json man = base_json();
        man["subcommand"] = subcommand_;
        man["files"] = files_;
        write_json("manifest.json", man);
        std::filesystem::remove_all(final_);
        std::filesystem::create_directories(final_.parent_path().empty()
                                                ? std::filesystem::path(".")
                                                : final_.parent_path());
        std::filesystem::rename(staging_, final_);
        committed_ = true;
    }

private:
    std::filesystem::path final_;
    std::filesystem::path staging_;
    ExperimentConfig cfg_;
    std::string subcommand_;
    std::vector<std::string> files_;
    bool committed_ = false;
};

}  // namespace waveop
