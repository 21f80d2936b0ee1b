#ifndef BUBBLES_SWEEP_HPP
#define BUBBLES_SWEEP_HPP

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bubbles/classify.hpp"

namespace bubbles {

enum class AxisScale { linear, log };

/// Grid specification for one sweep axis, parsed from the grammar
/// {lin|log}:<min>:<max>:<count>. Samples pin both endpoints exactly.
struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    AxisScale scale = AxisScale::linear;

    static AxisSpec parse(const std::string& text) {
        AxisSpec spec;
        std::istringstream in(text);
        std::string field;
        if (!std::getline(in, field, ':')) throw std::invalid_argument("axis spec: empty");
        if (field == "lin") spec.scale = AxisScale::linear;
        else if (field == "log") spec.scale = AxisScale::log;
        else throw std::invalid_argument("axis spec: scale must be lin or log, got '" + field + "'");
        try {
            if (!std::getline(in, field, ':')) throw std::invalid_argument("");
            spec.min = std::stod(field);
            if (!std::getline(in, field, ':')) throw std::invalid_argument("");
            spec.max = std::stod(field);
            if (!std::getline(in, field, ':')) throw std::invalid_argument("");
            spec.count = std::stoi(field);
        } catch (const std::exception&) {
            throw std::invalid_argument("axis spec: expected {lin|log}:<min>:<max>:<count>, got '" +
                                        text + "'");
        }
        if (std::getline(in, field, ':'))
            throw std::invalid_argument("axis spec: trailing fields in '" + text + "'");
        spec.validate();
        return spec;
    }

    void validate() const {
        if (!(min > 0.0) || !(max >= min))
            throw std::invalid_argument("axis spec: bounds must satisfy 0 < min <= max");
        if (count < 2) throw std::invalid_argument("axis spec: count must be >= 2");
    }

    std::vector<double> samples() const {
        std::vector<double> out(count);
        for (int i = 0; i < count; ++i) {
            const double frac = double(i) / double(count - 1);
            out[i] = scale == AxisScale::linear
                         ? min + (max - min) * frac
                         : min * std::pow(max / min, frac);
        }
        out.front() = min;
        out.back() = max;
        return out;
    }

    std::string str() const {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s:%.17g:%.17g:%d",
                      scale == AxisScale::linear ? "lin" : "log", min, max, count);
        return buf;
    }
};

enum class BlankReason { none, ordering_violated, tie_stripe, solver_failed };

/// One grid point of a sweep frame. `winner` is engaged only for decisive
/// cells; tie-stripe cells keep their perimeters and margin but stay blank,
/// mirroring the white guard stripes in the plots.
struct SweepCell {
    BlankReason blank = BlankReason::ordering_violated;
    std::optional<BubbleType> winner;
    double margin = 0.0;
    std::optional<double> p213, p3123, p2313, p32123;

    bool classified() const {
        return blank == BlankReason::none || blank == BlankReason::tie_stripe;
    }
};

/// Classifications over a (V2, V3) grid at fixed V1, in row-major order with
/// V2 as the slow axis.
struct SweepFrame {
    double v1 = 0.0;
    AxisSpec v2_axis, v3_axis;
    std::vector<SweepCell> cells;
    std::string density_name;
    double tie_threshold = kDefaultTieThreshold;
    double tol = 1e-12;

    const SweepCell& at(int i2, int i3) const { return cells[std::size_t(i2) * v3_axis.count + i3]; }
    SweepCell& at(int i2, int i3) { return cells[std::size_t(i2) * v3_axis.count + i3]; }
};

/// Classifies every admissible cell of one frame. Cells violating
/// V1 <= V2 <= V3 stay blank; solver failures blank the affected cell and
/// never abort the sweep. Worker threads split the rows; results do not
/// depend on the thread count.
template <Density D>
SweepFrame sweep_frame(const D& d, double v1, const AxisSpec& v2_axis, const AxisSpec& v3_axis,
                       double tie_threshold = kDefaultTieThreshold, double tol = 1e-12,
                       int threads = 1) {
    v2_axis.validate();
    v3_axis.validate();
    if (v2_axis.scale != AxisScale::linear || v3_axis.scale != AxisScale::linear)
        throw std::invalid_argument("sweep_frame: V2 and V3 axes must be linear");
    if (!(v1 > 0.0)) throw std::invalid_argument("sweep_frame: v1 must be positive");

    SweepFrame frame;
    frame.v1 = v1;
    frame.v2_axis = v2_axis;
    frame.v3_axis = v3_axis;
    frame.density_name = d.name();
    frame.tie_threshold = tie_threshold;
    frame.tol = tol;
    frame.cells.resize(std::size_t(v2_axis.count) * v3_axis.count);

    const std::vector<double> v2s = v2_axis.samples();
    const std::vector<double> v3s = v3_axis.samples();

    auto classify_row = [&](int i2) {
        const double v2 = v2s[i2];
        for (int i3 = 0; i3 < v3_axis.count; ++i3) {
            const double v3 = v3s[i3];
            SweepCell& cell = frame.at(i2, i3);
            if (!(v1 <= v2 && v2 <= v3)) {
                cell.blank = BlankReason::ordering_violated;
                continue;
            }
            try {
                const TripleClassification c = classify_triple(d, v1, v2, v3, tol, tie_threshold);
                cell.margin = c.margin;
                cell.p213 = c.p213;
                cell.p3123 = c.p3123;
                cell.p2313 = c.p2313;
                cell.p32123 = c.p32123;
                if (c.decisive) {
                    cell.blank = BlankReason::none;
                    cell.winner = c.winner;
                } else {
                    cell.blank = BlankReason::tie_stripe;
                }
            } catch (const std::exception&) {
                cell.blank = BlankReason::solver_failed;
            }
        }
    };

    const int workers = std::max(1, std::min(threads, v2_axis.count));
    if (workers == 1) {
        for (int i2 = 0; i2 < v2_axis.count; ++i2) classify_row(i2);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i2 = next.fetch_add(1); i2 < v2_axis.count; i2 = next.fetch_add(1))
                    classify_row(i2);
            });
        for (auto& th : pool) th.join();
    }
    return frame;
}

/// One frame per V1 sample.
template <Density D>
std::vector<SweepFrame> sweep(const D& d, const AxisSpec& v1_spec, const AxisSpec& v2_spec,
                              const AxisSpec& v3_spec, double tie_threshold = kDefaultTieThreshold,
                              double tol = 1e-12, int threads = 1) {
    v1_spec.validate();
    std::vector<SweepFrame> frames;
    frames.reserve(v1_spec.count);
    for (double v1 : v1_spec.samples())
        frames.push_back(sweep_frame(d, v1, v2_spec, v3_spec, tie_threshold, tol, threads));
    return frames;
}

namespace detail {

inline std::string csv_number(double v, const char* fmt) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

}  // namespace detail

/// Frame files carry `#`-prefixed metadata, a header line, and one row per
/// cell: v1,v2,v3,winner,margin,p213,p3123,p2313,p32123. Nonexistent or
/// unavailable values are empty fields. Blank reasons are recoverable: rows
/// without a margin are either ordering violations (V1 <= V2 <= V3 fails) or
/// solver failures; rows with a margin but no winner are tie stripes.
inline void write_frame_csv(const SweepFrame& frame, std::ostream& out) {
    out << "# sweep-frame\n";
    out << "# density=" << frame.density_name << "\n";
    out << "# v1=" << detail::csv_number(frame.v1, "%.17g") << "\n";
    out << "# v2=" << frame.v2_axis.str() << "\n";
    out << "# v3=" << frame.v3_axis.str() << "\n";
    out << "# tie=" << detail::csv_number(frame.tie_threshold, "%.17g") << "\n";
    out << "# tol=" << detail::csv_number(frame.tol, "%.17g") << "\n";
    out << "v1,v2,v3,winner,margin,p213,p3123,p2313,p32123\n";
    const std::vector<double> v2s = frame.v2_axis.samples();
    const std::vector<double> v3s = frame.v3_axis.samples();
    auto perim = [](const std::optional<double>& p) {
        return p ? detail::csv_number(*p, "%.7f") : std::string();
    };
    for (int i2 = 0; i2 < frame.v2_axis.count; ++i2) {
        for (int i3 = 0; i3 < frame.v3_axis.count; ++i3) {
            const SweepCell& cell = frame.at(i2, i3);
            out << detail::csv_number(frame.v1, "%.10g") << ','
                << detail::csv_number(v2s[i2], "%.10g") << ','
                << detail::csv_number(v3s[i3], "%.10g") << ',';
            if (cell.winner) out << to_string(*cell.winner);
            out << ',';
            if (cell.classified()) out << detail::csv_number(cell.margin, "%.10g");
            out << ',' << perim(cell.p213) << ',' << perim(cell.p3123) << ',' << perim(cell.p2313)
                << ',' << perim(cell.p32123) << '\n';
        }
    }
}

inline SweepFrame read_frame_csv(std::istream& in) {
    SweepFrame frame;
    std::string line;
    bool have_v2 = false, have_v3 = false, have_v1 = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(2, eq - 2);
            const std::string value = line.substr(eq + 1);
            if (key == "density") frame.density_name = value;
            else if (key == "v1") { frame.v1 = std::stod(value); have_v1 = true; }
            else if (key == "v2") { frame.v2_axis = AxisSpec::parse(value); have_v2 = true; }
            else if (key == "v3") { frame.v3_axis = AxisSpec::parse(value); have_v3 = true; }
            else if (key == "tie") frame.tie_threshold = std::stod(value);
            else if (key == "tol") frame.tol = std::stod(value);
            continue;
        }
        break;  // header line reached
    }
    if (!have_v1 || !have_v2 || !have_v3)
        throw std::runtime_error("frame csv: missing v1/v2/v3 metadata");
    if (line.rfind("v1,v2,v3,", 0) != 0)
        throw std::runtime_error("frame csv: missing column header");

    frame.cells.resize(std::size_t(frame.v2_axis.count) * frame.v3_axis.count);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= frame.cells.size()) throw std::runtime_error("frame csv: too many rows");
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        fields.resize(9);
        SweepCell& cell = frame.cells[row++];
        const double v1 = std::stod(fields[0]);
        const double v2 = std::stod(fields[1]);
        const double v3 = std::stod(fields[2]);
        auto opt = [](const std::string& s) {
            return s.empty() ? std::optional<double>() : std::optional<double>(std::stod(s));
        };
        cell.p213 = opt(fields[5]);
        cell.p3123 = opt(fields[6]);
        cell.p2313 = opt(fields[7]);
        cell.p32123 = opt(fields[8]);
        if (fields[4].empty()) {
            cell.blank = (v1 <= v2 && v2 <= v3) ? BlankReason::solver_failed
                                                : BlankReason::ordering_violated;
            continue;
        }
        cell.margin = std::stod(fields[4]);
        if (fields[3].empty()) {
            cell.blank = BlankReason::tie_stripe;
            continue;
        }
        cell.blank = BlankReason::none;
        for (BubbleType t : TripleClassification::triple_types())
            if (to_string(t) == fields[3]) cell.winner = t;
        if (!cell.winner) throw std::runtime_error("frame csv: unknown winner '" + fields[3] + "'");
    }
    if (row != frame.cells.size()) throw std::runtime_error("frame csv: missing rows");
    return frame;
}

/// Binary P6 image, one pixel per cell.
struct Pixmap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, top row first

    void write(std::ostream& out) const {
        out << "P6\n" << width << ' ' << height << "\n255\n";
        out.write(reinterpret_cast<const char*>(rgb.data()), std::streamsize(rgb.size()));
    }
};

/// Fixed palette: purple 213, blue 3123, green 2313, yellow 32123, white for
/// blank cells. V3 runs horizontally increasing rightward, V2 vertically
/// increasing upward.
inline Pixmap render_frame(const SweepFrame& frame) {
    Pixmap img;
    img.width = frame.v3_axis.count;
    img.height = frame.v2_axis.count;
    img.rgb.assign(std::size_t(img.width) * img.height * 3, 255);
    auto paint = [&](int row, int col, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        const std::size_t o = (std::size_t(row) * img.width + col) * 3;
        img.rgb[o] = r;
        img.rgb[o + 1] = g;
        img.rgb[o + 2] = b;
    };
    for (int i2 = 0; i2 < frame.v2_axis.count; ++i2) {
        const int row = frame.v2_axis.count - 1 - i2;
        for (int i3 = 0; i3 < frame.v3_axis.count; ++i3) {
            const SweepCell& cell = frame.at(i2, i3);
            if (!cell.winner) continue;
            switch (*cell.winner) {
                case BubbleType::T213: paint(row, i3, 128, 0, 128); break;
                case BubbleType::T3123: paint(row, i3, 0, 0, 255); break;
                case BubbleType::T2313: paint(row, i3, 0, 128, 128); break;
                case BubbleType::T32123: paint(row, i3, 255, 200, 0); break;
                default: break;
            }
        }
    }
    return img;
}

/// Writes frame_<k>.csv files under `dir` (created if needed).
inline std::vector<std::filesystem::path> save_frames(const std::vector<SweepFrame>& frames,
                                                      const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    paths.reserve(frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const auto path = dir / ("frame_" + std::to_string(k) + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        write_frame_csv(frames[k], out);
        paths.push_back(path);
    }
    return paths;
}

/// Renders every frame_<k>.csv in `in_dir` to frame_<k>.ppm in `out_dir`.
inline std::vector<std::filesystem::path> render_directory(const std::filesystem::path& in_dir,
                                                           const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    for (std::size_t k = 0;; ++k) {
        const auto in_path = in_dir / ("frame_" + std::to_string(k) + ".csv");
        if (!std::filesystem::exists(in_path)) break;
        std::ifstream in(in_path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read " + in_path.string());
        const SweepFrame frame = read_frame_csv(in);
        const Pixmap img = render_frame(frame);
        const auto out_path = out_dir / ("frame_" + std::to_string(k) + ".ppm");
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path.string());
        img.write(out);
        written.push_back(out_path);
    }
    if (written.empty())
        throw std::runtime_error("render: no frame_<k>.csv files found in " + in_dir.string());
    return written;
}

}  // namespace bubbles

#endif  // BUBBLES_SWEEP_HPP
