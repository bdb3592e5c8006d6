#include "mflab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mflab/error.hpp"

namespace mflab {

namespace {

std::string open(std::string_view provenance, std::string_view header) {
    std::string out;
    if (!provenance.empty()) {
        out += "# ";
        out += provenance;
        out += '\n';
    }
    out += header;
    out += '\n';
    return out;
}

}  // namespace

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trace_csv(const SummatoryTrace& trace, std::string_view provenance) {
    std::string out = open(provenance, "x,re_S,im_S,abs_S");
    for (const auto& cp : trace.checkpoints) {
        out += std::to_string(cp.x) + ',' + format_real(cp.S.real()) + ',' +
               format_real(cp.S.imag()) + ',' + format_real(std::abs(cp.S)) + '\n';
    }
    return out;
}

std::string eval_csv(const std::vector<EvalRow>& rows, std::string_view provenance) {
    std::string out = open(provenance, "sigma,t,re,im,abs,err,method");
    for (const auto& r : rows) {
        out += format_real(r.sigma) + ',' + format_real(r.t) + ',' +
               format_real(r.result.value.real()) + ',' + format_real(r.result.value.imag()) + ',' +
               format_real(std::abs(r.result.value)) + ',' + format_real(r.result.error_bound) + ',' +
               std::string(to_string(r.result.method)) + '\n';
    }
    return out;
}

std::string theorem1_csv(const std::vector<Theorem1Row>& rows, std::string_view provenance) {
    std::string out = open(provenance, "sigma,t,quantity,err");
    for (const auto& r : rows) {
        out += format_real(r.sigma) + ',' + format_real(r.t) + ',' +
               (r.ratio ? format_real(*r.ratio) : std::string("indeterminate")) + ',' +
               format_real(r.ratio_error) + '\n';
    }
    return out;
}

std::string lemma_csv(const std::vector<LemmaDefect>& rows, std::string_view provenance) {
    std::string out = open(provenance, "sigma,t,quantity,err,re_D,im_D,abs_D");
    for (const auto& r : rows) {
        out += format_real(r.point.sigma()) + ',' + format_real(r.point.t()) + ',' +
               format_real(r.ratio) + ',' + format_real(r.ratio_error) + ',' +
               format_real(r.D.value.real()) + ',' + format_real(r.D.value.imag()) + ',' +
               format_real(std::abs(r.D.value)) + '\n';
    }
    return out;
}

std::string theorem2_csv(const std::vector<Theorem2Row>& rows, std::string_view provenance) {
    std::string out = open(provenance, "x,ratio");
    for (const auto& r : rows) out += std::to_string(r.x) + ',' + format_real(r.ratio) + '\n';
    return out;
}

std::string pole_sum_csv(const PoleSumSeries& series, std::string_view provenance) {
    std::string out = open(provenance, "P,partial_sum");
    for (const auto& pt : series.points) {
        out += std::to_string(pt.P) + ',' + format_real(pt.partial_sum) + '\n';
    }
    return out;
}

SummatoryTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Usage, "cannot open trace '" + path + "'");
    SummatoryTrace trace;
    trace.function_label = path;
    std::string line;
    bool header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "x,re_S,im_S,abs_S") {
                fail(ErrorKind::Usage, path + ": expected header x,re_S,im_S,abs_S");
            }
            header = true;
            continue;
        }
        std::istringstream fields(line);
        std::string x, re, im;
        if (!std::getline(fields, x, ',') || !std::getline(fields, re, ',') ||
            !std::getline(fields, im, ',')) {
            fail(ErrorKind::Usage, path + ":" + std::to_string(lineno) + ": malformed row");
        }
        try {
            const std::uint64_t xv = std::stoull(x);
            if (!trace.checkpoints.empty() && xv <= trace.checkpoints.back().x) {
                fail(ErrorKind::Usage, path + ":" + std::to_string(lineno) + ": x not ascending");
            }
            trace.checkpoints.push_back({xv, {std::stod(re), std::stod(im)}});
        } catch (const std::logic_error&) {
            fail(ErrorKind::Usage, path + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    if (!header) fail(ErrorKind::Usage, path + ": empty trace");
    trace.limit = trace.checkpoints.empty() ? 0 : trace.checkpoints.back().x;
    return trace;
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Usage, "cannot write '" + path + "'");
    out << content;
    if (!out) fail(ErrorKind::Usage, "write to '" + path + "' failed");
}

}  // namespace mflab
