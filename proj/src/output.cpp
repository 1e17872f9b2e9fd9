#include "stochosc/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stochosc {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), p);
}

std::string trajectory_csv(const Trajectory& traj, std::string_view representation) {
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().dimension();
    std::string out = "t";
    for (std::size_t i = 1; i <= n; ++i) out += ",x_" + std::to_string(i);
    for (std::size_t i = 1; i <= n; ++i) out += ",v_" + std::to_string(i);
    out += ",escaped,representation\n";
    for (std::size_t r = 0; r < traj.states.size(); ++r) {
        out += format_double(traj.times[r]);
        for (double v : traj.states[r].x) (out += ',') += format_double(v);
        for (double v : traj.states[r].y) (out += ',') += format_double(v);
        const bool esc = traj.escaped && r + 1 == traj.states.size();
        out += esc ? ",1," : ",0,";
        out += representation;
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t p = line.find(sep, start);
        out.push_back(line.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) return out;
        start = p + 1;
    }
}

double parse_double(std::string_view s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw std::invalid_argument("csv: invalid number '" + std::string(s) + "'");
    return v;
}

}  // namespace

CsvTrajectory parse_trajectory_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    for (auto l : split(text, '\n'))
        if (!l.empty()) lines.push_back(l);
    if (lines.empty()) throw std::invalid_argument("csv: missing header");
    const auto header = split(lines[0], ',');
    if (header.size() < 5 || header.front() != "t" || header[header.size() - 2] != "escaped" ||
        header.back() != "representation" || (header.size() - 3) % 2 != 0)
        throw std::invalid_argument("csv: unexpected header");
    const std::size_t n = (header.size() - 3) / 2;

    CsvTrajectory out;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto f = split(lines[r], ',');
        if (f.size() != header.size()) throw std::invalid_argument("csv: row " + std::to_string(r) + " has wrong width");
        out.times.push_back(parse_double(f[0]));
        PhasePoint p{std::vector<double>(n), std::vector<double>(n)};
        for (std::size_t i = 0; i < n; ++i) {
            p.x[i] = parse_double(f[1 + i]);
            p.y[i] = parse_double(f[1 + n + i]);
        }
        out.states.push_back(std::move(p));
        if (f[1 + 2 * n] != "0" && f[1 + 2 * n] != "1") throw std::invalid_argument("csv: escaped must be 0 or 1");
        out.escaped.push_back(f[1 + 2 * n] == "1");
        out.representation.emplace_back(f[2 + 2 * n]);
    }
    return out;
}

std::string ensemble_summary_csv(const EnsembleSummary& s) {
    std::string out = "t,count,mean_norm,var_norm\n";
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        out += format_double(s.times[i]) + ',' + std::to_string(s.count[i]) + ',';
        out += s.count[i] ? format_double(s.mean[i]) + ',' + format_double(s.variance[i]) : std::string(",");
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kWidth = 800.0;
constexpr double kPanelHeight = 260.0;
constexpr double kTop = 50.0;
constexpr double kGap = 60.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;

const std::array<const char*, 6> kColours{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(double v) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

std::string tick_label(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void panel(std::ostringstream& os, const Trajectory& traj, bool positions, double top, const std::string& ylabel) {
    const std::size_t n = traj.states.front().dimension();
    const double t0 = traj.times.front();
    double t1 = traj.times.back();
    if (t1 <= t0) t1 = t0 + 1.0;

    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : traj.states)
        for (double v : positions ? s.x : s.y)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    if (!std::isfinite(lo)) lo = -1.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 1.0, hi += 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double w = kWidth - kLeft - kRight;
    const double h = kPanelHeight;
    auto px = [&](double t) { return kLeft + (t - t0) / (t1 - t0) * w; };
    auto py = [&](double v) { return top + (hi - v) / (hi - lo) * h; };

    os << "<g class=\"panel\">\n";
    os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double tv = t0 + (t1 - t0) * k / 4.0;
        const double vv = lo + (hi - lo) * k / 4.0;
        os << "<text x=\"" << fmt(px(tv)) << "\" y=\"" << fmt(top + h + 16) << "\" text-anchor=\"middle\">"
           << tick_label(tv) << "</text>\n";
        os << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py(vv) + 4) << "\" text-anchor=\"end\">"
           << tick_label(vv) << "</text>\n";
    }
    os << "<text x=\"" << fmt(kLeft + w / 2) << "\" y=\"" << fmt(top + h + 36) << "\" text-anchor=\"middle\">t</text>\n";
    os << "<text x=\"18\" y=\"" << fmt(top + h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << fmt(top + h / 2) << ")\">" << ylabel << "</text>\n";

    for (std::size_t i = 0; i < n; ++i) {
        os << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << kColours[i % kColours.size()] << "\" points=\"";
        bool first = true;
        for (std::size_t r = 0; r < traj.states.size(); ++r) {
            const double v = positions ? traj.states[r].x[i] : traj.states[r].y[i];
            if (!std::isfinite(v)) continue;
            if (!first) os << ' ';
            os << fmt(px(traj.times[r])) << ',' << fmt(py(std::clamp(v, lo, hi)));
            first = false;
        }
        os << "\"/>\n";
    }
    os << "</g>\n";
}

}  // namespace

std::string render_svg(const Trajectory& traj, const std::string& title) {
    if (traj.states.empty() || traj.times.size() != traj.states.size())
        throw std::invalid_argument("render_svg: empty trajectory");
    const double height = kTop + 2 * kPanelHeight + kGap + 50.0;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth) << "\" height=\"" << fmt(height)
       << "\" viewBox=\"0 0 " << fmt(kWidth) << ' ' << fmt(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
       << escape_xml(title) << "</text>\n";
    const bool multi = traj.states.front().dimension() > 1;
    panel(os, traj, true, kTop, multi ? "position x_i" : "position x");
    panel(os, traj, false, kTop + kPanelHeight + kGap, multi ? "velocity v_i" : "velocity v");
    os << "</svg>\n";
    return os.str();
}

}  // namespace stochosc
