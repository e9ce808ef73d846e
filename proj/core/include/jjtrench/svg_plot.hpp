#pragma once

#include <string>

#include "jjtrench/fluct.hpp"

namespace jjtrench::io {

/// Three-panel figure: trace with histogram, Allan deviation with the
/// white-noise line, PSD with the 1/f and white lines. Best effort.
std::string fluct_svg(const fluct::TimeTrace& trace, const fluct::TraceSummary& summary,
                      const fluct::AllanResult& allan, const fluct::PsdResult& psd,
                      const fluct::ReferenceLines& lines);

}  // namespace jjtrench::io
