#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nettomo/dynamics.hpp"

namespace nettomo {

// Sidecar describing a set of impulse-experiment CSV files.
struct ExperimentMeta {
    double delta = 0.0;
    int n = 0;
    std::vector<Vertex> inputs;   // 0-based here, 1-based on disk
    std::vector<Vertex> outputs;
    int horizon = 0;
    std::vector<std::string> records;  // file names relative to the sidecar
};

// %.17g
std::string format_real(double x);

// Header "k,v_1..v_rI,w_1..w_rO", one row per sample.
std::string io_record_to_csv(const IoRecord& rec);
IoRecord io_record_from_csv(const std::string& text, double delta, int n);

std::string meta_to_json(const ExperimentMeta& meta);
ExperimentMeta meta_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
// Writes via a temporary sibling and rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace nettomo
