#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dancehit/csv.hpp"
#include "dancehit/cv.hpp"
#include "dancehit/numeric.hpp"

namespace dancehit {

// Long-form results CSV: one row per (model, fs-condition).
inline void write_comparison_csv(
    std::ostream& os,
    const std::vector<std::pair<std::string, ModelComparison>>& tagged) {
    static const std::vector<std::string> header = {
        "model", "fs",       "mean_auc", "sd_auc",  "p_auc",
        "flag_auc", "mean_acc", "sd_acc",  "p_acc", "flag_acc"};
    write_csv_row(os, header);
    for (const auto& [tag, cmp] : tagged) {
        for (const auto& row : cmp.rows) {
            std::vector<std::string> fields = {
                row.model,
                tag,
                format_double(row.result.mean_auc),
                format_double(row.result.sd_auc),
                format_double(row.p_auc),
                std::string(to_string(row.band_auc)),
                format_double(row.result.mean_acc),
                format_double(row.result.sd_acc),
                format_double(row.p_acc),
                std::string(to_string(row.band_acc)),
            };
            write_csv_row(os, fields);
        }
    }
}

namespace detail {
inline std::string cell(double value, SigBand band) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(4) << value;
    std::string s = ss.str() + " [" + std::string(to_string(band)) + "]";
    return s;
}
}  // namespace detail

// Aligned text tables, one per metric: rows are models, one column per
// fs-condition, each cell annotated with its significance flag against the
// column's best model.
inline void write_comparison_text(
    std::ostream& os,
    const std::vector<std::pair<std::string, ModelComparison>>& tagged) {
    if (tagged.empty()) return;
    const std::size_t name_w = 22, cell_w = 20;

    for (bool auc_table : {true, false}) {
        os << std::left << std::setw(static_cast<int>(name_w))
           << (auc_table ? "AUC" : "Accuracy");
        for (const auto& [tag, cmp] : tagged)
            os << std::left << std::setw(static_cast<int>(cell_w)) << tag;
        os << '\n';
        for (std::size_t r = 0; r < tagged.front().second.rows.size(); ++r) {
            os << std::left << std::setw(static_cast<int>(name_w))
               << tagged.front().second.rows[r].model;
            for (const auto& [tag, cmp] : tagged) {
                const auto& row = cmp.rows[r];
                os << std::left << std::setw(static_cast<int>(cell_w))
                   << (auc_table ? detail::cell(row.result.mean_auc, row.band_auc)
                                 : detail::cell(row.result.mean_acc, row.band_acc));
            }
            os << '\n';
        }
        os << '\n';
    }
}

inline void write_roc_csv(std::ostream& os, const RocCurve& curve) {
    os << "fpr,tpr\n";
    for (const auto& p : curve.points)
        os << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
}

}  // namespace dancehit
