// stegograph: hide multiple payload images inside multiple cover images
// (2-bit LSB insertion with a per-cover JSON mapping-graph manifest),
// recover them from any subset order, report capacity, and analyze the
// histogram comb that LSB replacement leaves behind.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stegograph/png_io.hpp"
#include "stegograph/stegograph.hpp"

namespace fs = std::filesystem;
using namespace stegograph;

namespace {

// Exit codes, fixed for scripting:
//   0 success, 2 bad input (format/io/config), 3 insufficient capacity,
//   4 incomplete payload, 5 no stego segment found.
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitIncomplete = 4;
constexpr int kExitNoStego = 5;

int exit_code_for(const StegoError& e) {
    switch (e.kind()) {
    case ErrorKind::capacity: return kExitCapacity;
    case ErrorKind::incomplete_payload: return kExitIncomplete;
    case ErrorKind::no_stego_found:
    case ErrorKind::not_a_stego_segment: return kExitNoStego;
    default: return kExitInput;
    }
}

std::vector<std::uint8_t> parse_hex_key(const std::string& hex) {
    if (hex.empty() || hex.size() % 2 != 0)
        throw ConfigError("--xor-key must be a non-empty even-length hex string");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw ConfigError(std::string("invalid hex digit '") + c + "' in --xor-key");
    };
    std::vector<std::uint8_t> key;
    for (std::size_t i = 0; i < hex.size(); i += 2)
        key.push_back(std::uint8_t(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
    return key;
}

struct Options {
    std::uint64_t chunk_size = 512;
    int bits = 2;
    std::string xor_key_hex;
    std::string out_dir = ".";
    std::string json_out;
    bool overwrite = false;

    TransformSpec transform() const {
        return xor_key_hex.empty()
                   ? TransformSpec::identity()
                   : TransformSpec::xor_keystream(parse_hex_key(xor_key_hex));
    }
};

std::string stem_of(const std::string& path) {
    return fs::path(path).stem().string();
}

// All outputs go to temporary names first and are renamed together at the
// end, so a failing command never leaves partial results behind.
class StagedWriter {
public:
    explicit StagedWriter(bool overwrite) : overwrite_(overwrite) {}
    ~StagedWriter() {
        if (!committed_)
            for (const auto& [tmp, final_] : staged_) {
                std::error_code ec;
                fs::remove(tmp, ec);
            }
    }

    void stage_png(const fs::path& final_path, const RgbImage& image) {
        if (!overwrite_ && fs::exists(final_path))
            throw IoError(final_path.string() +
                          " already exists (use --overwrite to replace it)");
        fs::path tmp = final_path;
        tmp += ".tmp";
        save_png(tmp.string(), image);
        staged_.emplace_back(tmp, final_path);
    }

    void stage_text(const fs::path& final_path, const std::string& text) {
        if (!overwrite_ && fs::exists(final_path))
            throw IoError(final_path.string() +
                          " already exists (use --overwrite to replace it)");
        fs::path tmp = final_path;
        tmp += ".tmp";
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot create " + tmp.string());
        out << text;
        out.close();
        staged_.emplace_back(tmp, final_path);
    }

    void commit() {
        for (const auto& [tmp, final_] : staged_) fs::rename(tmp, final_);
        committed_ = true;
    }

private:
    bool overwrite_;
    bool committed_ = false;
    std::vector<std::pair<fs::path, fs::path>> staged_;
};

void write_json_out(const std::string& path, const nlohmann::ordered_json& j,
                    bool overwrite) {
    StagedWriter w(overwrite);
    w.stage_text(path, j.dump());
    w.commit();
}

int cmd_encode(const Options& opt, const std::vector<std::string>& cover_paths,
               const std::vector<std::string>& payload_paths) {
    std::vector<RgbImage> covers, payloads;
    for (const auto& p : cover_paths) covers.push_back(load_image(p));
    for (const auto& p : payload_paths) payloads.push_back(load_image(p));

    std::vector<std::uint64_t> sizes;
    for (const auto& p : payloads) sizes.push_back(p.byte_count());
    const CapacityPlan cap = plan(covers, sizes, opt.chunk_size, opt.bits);
    const std::vector<RgbImage> stegos =
        encode(payloads, covers, opt.chunk_size, opt.bits, opt.transform());

    fs::create_directories(opt.out_dir);
    StagedWriter writer(opt.overwrite);
    std::vector<std::string> outputs;
    for (std::size_t i = 0; i < stegos.size(); ++i) {
        fs::path out = fs::path(opt.out_dir) / (stem_of(cover_paths[i]) + ".stego.png");
        writer.stage_png(out, stegos[i]);
        outputs.push_back(out.string());
    }
    writer.commit();

    std::uint64_t total_slots = 0;
    for (const auto& c : covers) total_slots += c.byte_count();
    std::cout << "covers: " << covers.size() << ", payloads: " << payloads.size()
              << ", chunk size: " << opt.chunk_size << ", k: " << opt.bits << "\n";
    std::cout << "capacity: " << total_slots << " slots ("
              << total_slots * opt.bits << " bits, "
              << total_slots * opt.bits / 8 << " bytes)\n";
    std::cout << "payload bytes: " << cap.total_payload_bytes
              << ", overhead bytes: " << cap.total_overhead_bytes << " ("
              << 100.0 * double(cap.total_overhead_bytes) /
                     double(cap.total_payload_bytes)
              << "% of payload)\n";
    std::cout << "utilization: " << 100.0 * cap.utilization << "%\n";
    for (const auto& o : outputs) std::cout << "wrote " << o << "\n";

    if (!opt.json_out.empty()) {
        nlohmann::ordered_json j;
        j["covers"] = cover_paths;
        j["payloads"] = payload_paths;
        j["chunk_size"] = opt.chunk_size;
        j["bits_per_slot"] = opt.bits;
        j["total_slots"] = total_slots;
        j["payload_bytes"] = cap.total_payload_bytes;
        j["overhead_bytes"] = cap.total_overhead_bytes;
        j["utilization"] = cap.utilization;
        j["outputs"] = outputs;
        write_json_out(opt.json_out, j, true);
    }
    return 0;
}

int cmd_decode(const Options& opt, const std::vector<std::string>& stego_paths) {
    std::vector<RgbImage> stegos;
    for (const auto& p : stego_paths) stegos.push_back(load_image(p));
    DecodeResult result = decode(stegos, opt.bits, opt.transform());
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

    fs::create_directories(opt.out_dir);
    StagedWriter writer(opt.overwrite);
    std::vector<std::string> outputs;
    for (std::size_t id = 0; id < result.payloads.size(); ++id) {
        fs::path out = fs::path(opt.out_dir) / ("payload_" + std::to_string(id) + ".png");
        writer.stage_png(out, result.payloads[id]);
        outputs.push_back(out.string());
    }
    writer.commit();
    for (const auto& o : outputs) std::cout << "wrote " << o << "\n";

    if (!opt.json_out.empty()) {
        nlohmann::ordered_json j;
        j["inputs"] = stego_paths;
        j["outputs"] = outputs;
        j["warnings"] = result.warnings;
        write_json_out(opt.json_out, j, true);
    }
    return 0;
}

int cmd_capacity(const Options& opt, const std::vector<std::string>& cover_paths) {
    std::uint64_t total_slots = 0;
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    for (const auto& p : cover_paths) {
        RgbImage img = load_image(p);
        const std::uint64_t slots = img.byte_count();
        const std::uint64_t bits = slots * opt.bits;
        total_slots += slots;
        std::cout << p << ": " << img.width << "x" << img.height << ", " << slots
                  << " slots, " << bits << " bits, " << bits / 8
                  << " bytes at k=" << opt.bits << "\n";
        nlohmann::ordered_json j;
        j["file"] = p;
        j["width"] = img.width;
        j["height"] = img.height;
        j["slots"] = slots;
        j["bits"] = bits;
        j["bytes"] = bits / 8;
        items.push_back(std::move(j));
    }
    std::cout << "total: " << total_slots << " slots, " << total_slots * opt.bits
              << " bits, " << total_slots * opt.bits / 8 << " bytes at k="
              << opt.bits << "\n";
    if (!opt.json_out.empty()) {
        nlohmann::ordered_json j;
        j["bits_per_slot"] = opt.bits;
        j["covers"] = std::move(items);
        j["total_slots"] = total_slots;
        j["total_bits"] = total_slots * opt.bits;
        j["total_bytes"] = total_slots * opt.bits / 8;
        write_json_out(opt.json_out, j, true);
    }
    return 0;
}

nlohmann::ordered_json comb_json(const std::string& file, const RgbImage& img,
                                 const CombReport& r) {
    nlohmann::ordered_json j;
    j["file"] = file;
    j["width"] = img.width;
    j["height"] = img.height;
    j["bits_per_slot"] = r.bits_per_slot;
    j["chi_square"] = {r.chi_square[0], r.chi_square[1], r.chi_square[2]};
    j["gap_fraction"] = {r.gap_fraction[0], r.gap_fraction[1], r.gap_fraction[2]};
    j["aggregate_chi_square"] = r.aggregate_chi_square;
    j["combined_max_bin"] = r.combined_max_bin;
    j["verdict"] = r.verdict;
    j["degenerate"] = r.degenerate;
    return j;
}

int cmd_analyze(const Options& opt, const std::vector<std::string>& image_paths,
                const std::vector<std::string>& compare_pair) {
    if (!compare_pair.empty()) {
        RgbImage a = load_image(compare_pair[0]);
        RgbImage b = load_image(compare_pair[1]);
        CompareReport r = compare(a, b);
        std::cout << "compare " << compare_pair[0] << " vs " << compare_pair[1] << "\n";
        std::cout << "max delta (r,g,b): " << r.max_delta[0] << "," << r.max_delta[1]
                  << "," << r.max_delta[2] << " (overall " << r.overall_max_delta
                  << ")\n";
        std::cout << "mean abs delta (r,g,b): " << r.mean_abs_delta[0] << ","
                  << r.mean_abs_delta[1] << "," << r.mean_abs_delta[2] << "\n";
        std::cout << "combined max-bin ratio: " << r.max_bin_ratio << "\n";
        if (!opt.json_out.empty()) {
            nlohmann::ordered_json j;
            j["file_a"] = compare_pair[0];
            j["file_b"] = compare_pair[1];
            j["max_delta"] = {r.max_delta[0], r.max_delta[1], r.max_delta[2]};
            j["mean_abs_delta"] = {r.mean_abs_delta[0], r.mean_abs_delta[1],
                                   r.mean_abs_delta[2]};
            j["overall_max_delta"] = r.overall_max_delta;
            j["max_bin_ratio"] = r.max_bin_ratio;
            write_json_out(opt.json_out, j, true);
        }
        return 0;
    }

    fs::create_directories(opt.out_dir);
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    StagedWriter writer(opt.overwrite);
    for (const auto& p : image_paths) {
        RgbImage img = load_image(p);
        ChannelHistogram hist = histogram(img);
        CombReport r = comb_score(hist, opt.bits);

        std::ostringstream csv;
        write_histogram_csv(hist, csv);
        fs::path csv_path = fs::path(opt.out_dir) / (stem_of(p) + ".hist.csv");
        writer.stage_text(csv_path, csv.str());

        std::cout << p << ": chi2 (r,g,b) " << r.chi_square[0] << ","
                  << r.chi_square[1] << "," << r.chi_square[2] << ", gaps (r,g,b) "
                  << r.gap_fraction[0] << "," << r.gap_fraction[1] << ","
                  << r.gap_fraction[2] << ", max bin " << r.combined_max_bin
                  << ", verdict " << r.verdict
                  << (r.degenerate ? " (degenerate)" : "") << "\n";
        std::cout << "wrote " << csv_path.string() << "\n";
        items.push_back(comb_json(p, img, r));
    }
    writer.commit();
    if (!opt.json_out.empty()) write_json_out(opt.json_out, items, true);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-image LSB steganography with a JSON mapping-graph manifest"};
    app.require_subcommand(1);

    Options opt;
    std::vector<std::string> covers, payloads, stegos, images, compare_pair;

    auto add_common = [&](CLI::App* cmd, bool with_transform) {
        cmd->add_option("--bits", opt.bits, "bits per slot (1..3)")
            ->check(CLI::Range(1, 3))
            ->capture_default_str();
        if (with_transform)
            cmd->add_option("--xor-key", opt.xor_key_hex,
                            "hex key enabling the xor-keystream payload transform");
        cmd->add_option("--out", opt.out_dir, "output directory")
            ->capture_default_str();
        cmd->add_option("--json-out", opt.json_out,
                        "write a machine-readable summary to this path");
        cmd->add_flag("--overwrite", opt.overwrite, "replace existing outputs");
    };

    CLI::App* enc = app.add_subcommand("encode", "embed payload images into covers");
    enc->add_option("covers", covers, "cover images, in serial fill order")
        ->required()
        ->expected(-1);
    enc->add_option("--payloads", payloads, "payload images to hide")
        ->required()
        ->expected(-1);
    enc->add_option("--chunk-size", opt.chunk_size, "payload chunk size in bytes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(enc, true);

    CLI::App* dec = app.add_subcommand("decode", "recover payload images from stegos");
    dec->add_option("stegos", stegos, "stego images, any order")
        ->required()
        ->expected(-1);
    add_common(dec, true);

    CLI::App* cap = app.add_subcommand("capacity", "report embeddable capacity");
    cap->add_option("covers", images, "cover images")->required()->expected(-1);
    add_common(cap, false);

    CLI::App* ana = app.add_subcommand("analyze", "histogram and comb analysis");
    ana->add_option("images", images, "images to analyze")->expected(-1);
    ana->add_option("--compare", compare_pair,
                    "compare an original and a stego image")
        ->expected(2);
    add_common(ana, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(enc)) return cmd_encode(opt, covers, payloads);
        if (app.got_subcommand(dec)) return cmd_decode(opt, stegos);
        if (app.got_subcommand(cap)) return cmd_capacity(opt, images);
        if (app.got_subcommand(ana)) {
            if (compare_pair.empty() && images.empty()) {
                std::cerr << "analyze needs image paths or --compare A B\n";
                return kExitInput;
            }
            return cmd_analyze(opt, images, compare_pair);
        }
    } catch (const StegoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
