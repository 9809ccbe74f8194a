#include "modsamp/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string_view>

#include "modsamp/error.hpp"

namespace modsamp {

namespace {

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

double parse_field(std::string_view f, const std::string& where)
{
    while (!f.empty() && f.front() == ' ')
        f.remove_prefix(1);
    while (!f.empty() && f.back() == ' ')
        f.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size())
        throw DataError(where + ": cannot parse '" + std::string(f) + "' as a number");
    if (!std::isfinite(v))
        throw DataError(where + ": non-finite value");
    return v;
}

}  // namespace

TraceRows read_trace_csv(std::istream& in, const std::string& name)
{
    std::string line;
    if (!std::getline(in, line))
        throw DataError(name + ": empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    bool has_input = false;
    if (line == "time_s,input_v,folded_v")
        has_input = true;
    else if (line != "time_s,folded_v")
        throw DataError(name + ":1: header must be 'time_s,input_v,folded_v' or 'time_s,folded_v'");

    TraceRows rows;
    const std::size_t width = has_input ? 3 : 2;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::string where = name + ":" + std::to_string(lineno);
        const auto fields = split(line);
        if (fields.size() != width)
            throw DataError(where + ": expected " + std::to_string(width) + " fields, got " +
                            std::to_string(fields.size()));
        const double t = parse_field(fields[0], where);
        if (!rows.time.empty() && !(t > rows.time.back()))
            throw DataError(where + ": time does not increase");
        rows.time.push_back(t);
        if (has_input)
            rows.input.push_back(parse_field(fields[1], where));
        rows.folded.push_back(parse_field(fields[width - 1], where));
    }
    if (rows.time.empty())
        throw DataError(name + ": no samples");
    return rows;
}

TraceRows read_trace_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open trace '" + path + "'");
    return read_trace_csv(in, path);
}

TraceMeta read_sidecar(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open sidecar '" + path + "'");
    try {
        const auto j = nlohmann::json::parse(in);
        if (!j.is_object())
            throw ConfigError(path + ": sidecar must be a JSON object");
        for (const auto& [key, _] : j.items())
            if (key != "lambda" && key != "fs")
                throw ConfigError(path + ": unknown key '" + key + "'");
        TraceMeta m;
        m.lambda = j.at("lambda").get<double>();
        m.fs = j.at("fs").get<double>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

IngestedTrace ingest_trace(const TraceRows& rows, const TraceMeta& meta, const IngestOptions& opt)
{
    if (!(meta.lambda > 0.0) || !(meta.fs > 0.0))
        throw ConfigError("trace metadata needs lambda > 0 and fs > 0");
    if (!(opt.slack >= 0.0))
        throw ConfigError("fold-range slack must be >= 0");
    const std::size_t n = rows.time.size();
    if (n == 0 || rows.folded.size() != n || (!rows.input.empty() && rows.input.size() != n))
        throw DataError("trace columns differ in length");

    const double lo = -meta.lambda * (1.0 + opt.slack);
    const double hi = meta.lambda * (1.0 + opt.slack);
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && !(rows.time[k] > rows.time[k - 1]))
            throw DataError("row " + std::to_string(k + 2) + ": time does not increase");
        if (!(rows.folded[k] >= lo && rows.folded[k] < hi))
            throw DataError("row " + std::to_string(k + 2) + ": folded value " + std::to_string(rows.folded[k]) +
                            " outside [-lambda, lambda) beyond the allowed slack");
    }

    const double period = 1.0 / meta.fs;
    SamplingGrid grid = make_uniform_grid(rows.time[0], period, n);
    std::vector<double> offsets(n);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        offsets[k] = rows.time[k] - (rows.time[0] + static_cast<double>(k) * period);
        worst = std::max(worst, std::abs(offsets[k]));
    }
    if (worst > opt.grid_tolerance * period) {
        if (!(worst < 0.5 * period))
            throw DataError("instants deviate from the nominal grid by half a period or more; check fs");
        grid.offsets = std::move(offsets);
        grid.jitter = worst / period;
    }

    IngestedTrace out;
    out.meta = meta;
    const double nyquist_band = 0.5 * meta.fs;
    out.folded = SampledSignal{rows.folded, grid, nyquist_band, meta.lambda};
    if (!rows.input.empty())
        out.reference = SampledSignal{rows.input, grid, nyquist_band, std::nullopt};
    return out;
}

IngestedTrace ingest_trace(const std::string& path, const TraceMeta& meta, const IngestOptions& opt)
{
    return ingest_trace(read_trace_csv(path), meta, opt);
}

void emit_trace(std::ostream& out, const SampledSignal& folded, const std::vector<double>* input)
{
    const std::size_t n = folded.values.size();
    if (folded.grid.count != n)
        throw DataError("grid and samples differ in length");
    if (input && input->size() != n)
        throw DataError("input column differs in length");
    out << (input ? "time_s,input_v,folded_v\n" : "time_s,folded_v\n");
    char buf[96];
    for (std::size_t k = 0; k < n; ++k) {
        if (input)
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", folded.grid.instant(k), (*input)[k],
                          folded.values[k]);
        else
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", folded.grid.instant(k), folded.values[k]);
        out << buf;
    }
}

void emit_trace(const std::string& path, const SampledSignal& folded, const std::vector<double>* input)
{
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write trace '" + path + "'");
    emit_trace(out, folded, input);
}

}  // namespace modsamp
