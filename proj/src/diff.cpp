#include "acr/diff.hpp"

#include <algorithm>
#include <vector>

namespace acr {

namespace {

struct LineSet {
    std::vector<std::string_view> lines;  // without the trailing '\n'
    bool ends_with_newline = true;
};

LineSet split_lines(std::string_view text) {
    LineSet out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            out.lines.push_back(text.substr(pos));
            out.ends_with_newline = false;
            break;
        }
        out.lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return out;
}

enum class Op : char { Keep, Del, Ins };

// Myers greedy O((N+M)D) shortest edit script over lines.
std::vector<Op> line_diff(const std::vector<std::string_view>& a,
                          const std::vector<std::string_view>& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int max = n + m;
    if (max == 0) return {};

    std::vector<std::vector<int>> trace;
    std::vector<int> v(static_cast<std::size_t>(2 * max + 1), 0);
    auto vi = [&](std::vector<int>& vec, int k) -> int& {
        return vec[static_cast<std::size_t>(k + max)];
    };

    int d_final = -1;
    for (int d = 0; d <= max; ++d) {
        trace.push_back(v);
        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && vi(v, k - 1) < vi(v, k + 1)))
                x = vi(v, k + 1);
            else
                x = vi(v, k - 1) + 1;
            int y = x - k;
            while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
                ++x;
                ++y;
            }
            vi(v, k) = x;
            if (x >= n && y >= m) {
                d_final = d;
                break;
            }
        }
        if (d_final >= 0) break;
    }

    // Backtrack.
    std::vector<Op> ops;
    int x = n, y = m;
    for (int d = d_final; d > 0; --d) {
        auto& pv = trace[static_cast<std::size_t>(d)];
        int k = x - y;
        int prev_k;
        if (k == -d || (k != d && vi(pv, k - 1) < vi(pv, k + 1)))
            prev_k = k + 1;
        else
            prev_k = k - 1;
        int prev_x = vi(pv, prev_k);
        int prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            ops.push_back(Op::Keep);
            --x;
            --y;
        }
        if (x == prev_x) {
            ops.push_back(Op::Ins);
            --y;
        } else {
            ops.push_back(Op::Del);
            --x;
        }
    }
    while (x > 0 && y > 0) {
        ops.push_back(Op::Keep);
        --x;
        --y;
    }
    while (x > 0) {
        ops.push_back(Op::Del);
        --x;
    }
    while (y > 0) {
        ops.push_back(Op::Ins);
        --y;
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

}  // namespace

std::string unified_diff(std::string_view old_text, std::string_view new_text,
                         std::string_view old_label, std::string_view new_label, int context) {
    if (old_text == new_text) return {};

    LineSet a = split_lines(old_text);
    LineSet b = split_lines(new_text);
    std::vector<Op> ops = line_diff(a.lines, b.lines);

    struct Row {
        Op op;
        std::string_view text;
        bool missing_newline = false;
    };
    std::vector<Row> rows;
    rows.reserve(ops.size());
    std::size_t ai = 0, bi = 0;
    for (Op op : ops) {
        switch (op) {
        case Op::Keep:
            rows.push_back({op, a.lines[ai], ai + 1 == a.lines.size() && !a.ends_with_newline});
            ++ai;
            ++bi;
            break;
        case Op::Del:
            rows.push_back({op, a.lines[ai], ai + 1 == a.lines.size() && !a.ends_with_newline});
            ++ai;
            break;
        case Op::Ins:
            rows.push_back({op, b.lines[bi], bi + 1 == b.lines.size() && !b.ends_with_newline});
            ++bi;
            break;
        }
    }

    std::string out;
    out += "--- ";
    out += old_label;
    out += '\n';
    out += "+++ ";
    out += new_label;
    out += '\n';

    // Build hunks: a run of changes plus up to `context` Keep rows around it,
    // merging runs separated by at most 2*context kept lines.
    const int n_rows = static_cast<int>(rows.size());
    int old_line = 1, new_line = 1;
    int i = 0;
    // Precompute old/new line numbers at each row start.
    std::vector<int> old_at(static_cast<std::size_t>(n_rows) + 1),
        new_at(static_cast<std::size_t>(n_rows) + 1);
    for (int r = 0; r < n_rows; ++r) {
        old_at[static_cast<std::size_t>(r)] = old_line;
        new_at[static_cast<std::size_t>(r)] = new_line;
        if (rows[static_cast<std::size_t>(r)].op != Op::Ins) ++old_line;
        if (rows[static_cast<std::size_t>(r)].op != Op::Del) ++new_line;
    }
    old_at[static_cast<std::size_t>(n_rows)] = old_line;
    new_at[static_cast<std::size_t>(n_rows)] = new_line;

    while (i < n_rows) {
        if (rows[static_cast<std::size_t>(i)].op == Op::Keep) {
            ++i;
            continue;
        }
        int hunk_first = std::max(0, i - context);
        int hunk_last = i;  // exclusive below
        int j = i;
        int kept = 0;
        while (j < n_rows) {
            if (rows[static_cast<std::size_t>(j)].op == Op::Keep) {
                ++kept;
                if (kept > 2 * context) break;
            } else {
                kept = 0;
                hunk_last = j;
            }
            ++j;
        }
        int hunk_end = std::min(n_rows, hunk_last + 1 + context);

        int old_start = old_at[static_cast<std::size_t>(hunk_first)];
        int new_start = new_at[static_cast<std::size_t>(hunk_first)];
        int old_count = 0, new_count = 0;
        for (int r = hunk_first; r < hunk_end; ++r) {
            if (rows[static_cast<std::size_t>(r)].op != Op::Ins) ++old_count;
            if (rows[static_cast<std::size_t>(r)].op != Op::Del) ++new_count;
        }
        out += "@@ -" + std::to_string(old_count == 0 ? old_start - 1 : old_start) + "," +
               std::to_string(old_count) + " +" +
               std::to_string(new_count == 0 ? new_start - 1 : new_start) + "," +
               std::to_string(new_count) + " @@\n";
        for (int r = hunk_first; r < hunk_end; ++r) {
            const Row& row = rows[static_cast<std::size_t>(r)];
            out += row.op == Op::Keep ? ' ' : row.op == Op::Del ? '-' : '+';
            out += row.text;
            out += '\n';
            if (row.missing_newline) out += "\\ No newline at end of file\n";
        }
        i = hunk_end;
    }
    return out;
}

}  // namespace acr
