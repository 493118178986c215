#include "phasecrb/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>
#include <unistd.h>

#include "phasecrb/error.hpp"

namespace phasecrb {

void write_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out)
            throw Error("failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot move output into place at " + path + ": " + ec.message());
    }
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "";
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(17);
    s << v;
    return s.str();
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows)
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + format_double(row[i]);
        out += '\n';
    }
    return out;
}

namespace {

// Samples of the viridis colormap at 0, 1/8, ..., 1.
constexpr std::array<std::array<double, 3>, 9> kViridis{{{68, 1, 84},
                                                         {71, 44, 122},
                                                         {59, 81, 139},
                                                         {44, 113, 142},
                                                         {33, 144, 141},
                                                         {39, 173, 129},
                                                         {92, 200, 99},
                                                         {170, 220, 50},
                                                         {253, 231, 37}}};

std::string viridis(double t)
{
    t = std::clamp(t, 0.0, 1.0) * 8.0;
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), 7);
    const double f = t - static_cast<double>(i);
    char buf[8];
    int rgb[3];
    for (int k = 0; k < 3; ++k)
        rgb[k] = static_cast<int>(std::lround(kViridis[i][k] + f * (kViridis[i + 1][k] - kViridis[i][k])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

} // namespace

std::string surface_svg(const std::vector<SurfaceCell>& cells, std::size_t gamma_count, std::size_t tau_count)
{
    if (cells.size() != gamma_count * tau_count || cells.empty())
        throw DomainError("surface size does not match the grid");
    // Colour by log C, clipped at the 95th percentile so the divergence near gamma* -> 0 does not wash out the map.
    std::vector<double> logs;
    for (const auto& c : cells)
        if (c.ok)
            logs.push_back(std::log(c.c));
    std::sort(logs.begin(), logs.end());
    const double lo = logs.empty() ? 0.0 : logs.front();
    const double hi = logs.empty() ? 1.0 : logs[static_cast<std::size_t>(0.95 * static_cast<double>(logs.size() - 1))];

    const double cw = 8.0, ch = 12.0, left = 60.0, top = 20.0;
    const double width = left + cw * static_cast<double>(gamma_count) + 20.0;
    const double height = top + ch * static_cast<double>(tau_count) + 50.0;
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    for (std::size_t j = 0; j < tau_count; ++j)
        for (std::size_t i = 0; i < gamma_count; ++i) {
            const auto& c = cells[j * gamma_count + i];
            const double x = left + cw * static_cast<double>(i);
            // tau increases upwards.
            const double y = top + ch * static_cast<double>(tau_count - 1 - j);
            const std::string fill = c.ok ? viridis(hi > lo ? (std::log(c.c) - lo) / (hi - lo) : 0.0) : "#999999";
            s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\""
              << fill << "\"><title>gamma*=" << format_double(c.gamma_star) << " tau=" << format_double(c.tau)
              << " C=" << (c.ok ? format_double(c.c) : std::string("missing")) << "</title></rect>\n";
        }
    const double bottom = top + ch * static_cast<double>(tau_count);
    s << "<text x=\"" << left << "\" y=\"" << bottom + 20 << "\" font-size=\"12\">gamma* "
      << format_double(cells.front().gamma_star) << " .. " << format_double(cells.back().gamma_star) << "</text>\n";
    s << "<text x=\"4\" y=\"" << top + 12 << "\" font-size=\"12\">tau " << format_double(cells.back().tau) << "</text>\n";
    s << "<text x=\"4\" y=\"" << bottom << "\" font-size=\"12\">tau " << format_double(cells.front().tau) << "</text>\n";
    s << "<text x=\"" << left << "\" y=\"" << bottom + 40 << "\" font-size=\"12\">colour: log C (viridis)</text>\n";
    s << "</svg>\n";
    return s.str();
}

} // namespace phasecrb
