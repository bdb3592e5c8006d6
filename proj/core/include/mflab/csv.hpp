// csv.hpp
// CSV text for the diagnostics. Reals print with %.17g so files round-trip
// and repeated runs are byte-identical. Each document opens with a single
// "# ..." provenance line when one is given.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mflab/dirichlet.hpp"
#include "mflab/halasz.hpp"
#include "mflab/multfun.hpp"

namespace mflab {

std::string format_real(double v);

// x,re_S,im_S,abs_S
std::string trace_csv(const SummatoryTrace& trace, std::string_view provenance = {});

struct EvalRow {
    double sigma;
    double t;
    EvalResult result;
};
// sigma,t,re,im,abs,err,method
std::string eval_csv(const std::vector<EvalRow>& rows, std::string_view provenance = {});

// sigma,t,quantity,err with quantity "indeterminate" when |F| is not resolved
std::string theorem1_csv(const std::vector<Theorem1Row>& rows, std::string_view provenance = {});

// sigma,t,quantity,err,re_D,im_D,abs_D
std::string lemma_csv(const std::vector<LemmaDefect>& rows, std::string_view provenance = {});

// x,ratio
std::string theorem2_csv(const std::vector<Theorem2Row>& rows, std::string_view provenance = {});

// P,partial_sum
std::string pole_sum_csv(const PoleSumSeries& series, std::string_view provenance = {});

// Reads back x,re_S,im_S,abs_S (comment lines skipped).
SummatoryTrace read_trace_csv(const std::string& path);

void write_text_file(const std::string& path, std::string_view content);

}  // namespace mflab
