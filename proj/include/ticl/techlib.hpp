// SPDX-License-Identifier: Apache-2.0
#ifndef TICL_TECHLIB_HPP
#define TICL_TECHLIB_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ticl {

enum class CellKind { Sequential, Combinational };

// Per-cell timing parameters, all in nanoseconds. cq_min defaults to cq_max
// and delay_min to delay_max when not given, so single-corner libraries give
// deterministic hold results. tau/tw are the metastability resolution
// constant and vulnerability window used by MTBF analysis; optional because
// most libraries never characterize them.
struct CellSpec {
    CellKind kind = CellKind::Combinational;
    double setup = 0.0;
    double hold = 0.0;
    double cq_max = 0.0;
    double cq_min = 0.0;
    double delay_max = 0.0;
    double delay_min = 0.0;
    int inputs = 0;
    std::optional<double> tau;
    std::optional<double> tw;
};

struct Library {
    std::string name;
    std::map<std::string, CellSpec> cells;

    const CellSpec *find(const std::string &cell) const
    {
        auto it = cells.find(cell);
        return it == cells.end() ? nullptr : &it->second;
    }
    // Throws Error("unresolved cell ...") when absent.
    const CellSpec &at(const std::string &cell) const;
};

Library parse_library(std::string_view text);

// Kintex UltraScale+-class reference library: FDRE flip-flop and LUT6, plus
// a clock buffer. tau/tw are documented placeholders (0.100 ns each),
// overridable via a .tlib file.
Library builtin_fpga();

// 7 nm-class standard-cell reference library: DFF_SVT, NAND2 and a few
// companion gates. tau/tw placeholders are 0.020 ns.
Library builtin_asic();

} // namespace ticl

#endif
