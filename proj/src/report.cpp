#include "cbwk/rng.hpp"
#include "cbwk/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace cbwk {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path);
}

const char* kHeader = "algorithm,sweep_param,sweep_value,seed,regret,tau,total_reward,runtime_ms";

}  // namespace

std::string format_csv(const SweepResult& result, const CsvOptions& opts) {
    std::string out = std::string(kHeader) + "\n";
    for (const auto& r : result.rows) {
        out += r.algorithm + "," + r.sweep_param + "," + num(r.sweep_value) + "," + std::to_string(r.seed) +
               "," + num(r.regret) + "," + std::to_string(r.tau) + "," + num(r.total_reward) + "," +
               (opts.timing ? num(r.runtime_ms) : std::string("0")) + "\n";
    }
    return out;
}

void write_csv(const SweepResult& result, const std::string& path, const CsvOptions& opts) {
    write_file(path, format_csv(result, opts));
}

SweepResult read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line != kHeader)
        throw std::runtime_error(path + ": unexpected CSV header");
    SweepResult res;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (f.size() != 8) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 8 fields");
        SweepRow r;
        r.algorithm = f[0];
        r.sweep_param = f[1];
        r.sweep_value = std::stod(f[2]);
        r.seed = std::stoull(f[3]);
        r.regret = std::stod(f[4]);
        r.tau = std::stoi(f[5]);
        r.total_reward = std::stod(f[6]);
        r.runtime_ms = std::stod(f[7]);
        if (std::isnan(r.regret)) r.error = "failed";
        res.rows.push_back(std::move(r));
    }
    return res;
}

void write_summary(const SweepResult& result, const std::string& path) {
    std::string out = std::string("# rng=") + kRngName + "\n";
    out += "algorithm,sweep_param,sweep_value,n,mean_regret,std_regret\n";
    const std::string param = result.rows.empty() ? "" : result.rows.front().sweep_param;
    for (const auto& c : result.aggregate())
        out += c.algorithm + "," + param + "," + num(c.sweep_value) + "," + std::to_string(c.n) + "," +
               num(c.mean_regret) + "," + num(c.std_regret) + "\n";
    write_file(path, out);
}

std::string format_svg(const SweepResult& result) {
    const auto cells = result.aggregate();
    if (cells.empty()) throw std::runtime_error("nothing to plot: no successful rows");

    std::vector<std::string> order;
    std::map<std::string, std::vector<SweepCell>> series;
    for (const auto& c : cells) {
        if (!series.count(c.algorithm)) order.push_back(c.algorithm);
        series[c.algorithm].push_back(c);
    }
    for (auto& [name, pts] : series)
        std::sort(pts.begin(), pts.end(), [](const SweepCell& a, const SweepCell& b) { return a.sweep_value < b.sweep_value; });

    double xmin = cells.front().sweep_value, xmax = xmin;
    double ymin = cells.front().mean_regret - cells.front().std_regret;
    double ymax = cells.front().mean_regret + cells.front().std_regret;
    for (const auto& c : cells) {
        xmin = std::min(xmin, c.sweep_value);
        xmax = std::max(xmax, c.sweep_value);
        ymin = std::min(ymin, c.mean_regret - c.std_regret);
        ymax = std::max(ymax, c.mean_regret + c.std_regret);
    }
    if (xmax == xmin) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (ymax == ymin) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double W = 640, H = 420, left = 70, right = 170, top = 30, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    auto X = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
    const std::string param = result.rows.front().sweep_param;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
      << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        s << "<line x1=\"" << X(xv) << "\" y1=\"" << top + ph << "\" x2=\"" << X(xv) << "\" y2=\"" << top + ph + 5
          << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << X(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << short_num(xv)
          << "</text>\n";
        s << "<line x1=\"" << left - 5 << "\" y1=\"" << Y(yv) << "\" x2=\"" << left << "\" y2=\"" << Y(yv)
          << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << left - 8 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\">" << short_num(yv)
          << "</text>\n";
    }
    s << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << param << "</text>\n";
    s << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + ph / 2 << ")\">regret</text>\n";

    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& pts = series[order[k]];
        const char* color = palette[k % 6];
        s << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
        for (const auto& p : pts) s << X(p.sweep_value) << "," << Y(p.mean_regret + p.std_regret) << " ";
        for (auto it = pts.rbegin(); it != pts.rend(); ++it)
            s << X(it->sweep_value) << "," << Y(it->mean_regret - it->std_regret) << " ";
        s << "\"/>\n";
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& p : pts) s << X(p.sweep_value) << "," << Y(p.mean_regret) << " ";
        s << "\"/>\n";
        for (const auto& p : pts)
            s << "<circle cx=\"" << X(p.sweep_value) << "\" cy=\"" << Y(p.mean_regret) << "\" r=\"3\" fill=\"" << color
              << "\"/>\n";
        const double ly = top + 15 + 18 * static_cast<double>(k);
        s << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 32 << "\" y2=\"" << ly
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly + 4 << "\">" << order[k] << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void render_plot(const SweepResult& result, const std::string& path) { write_file(path, format_svg(result)); }

}  // namespace cbwk
