#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "speedlab/configuration.hpp"

namespace speedlab::cli {

/// Output sink: a file when a path is given, stdout for "" or "-".
class Output {
public:
    explicit Output(const std::string& path);
    std::ostream& stream() { return *out_; }

private:
    std::unique_ptr<std::ostream> file_;
    std::ostream* out_;
};

/// "lo:hi" with lo <= hi.
std::pair<Site, Site> parse_range(const std::string& text);

/// "a:b" (inclusive range) or "a,b,c".
std::vector<Label> parse_labels(const std::string& text);

/// "0.3,0.3,0.4".
std::vector<double> parse_doubles(const std::string& text);

/// Shortest round-trip decimal representation ('.' separator).
std::string fmt(double x);

void add_simulate(CLI::App& app);
void add_stationary(CLI::App& app);
void add_density(CLI::App& app);
void add_verify(CLI::App& app, int& exit_code);

}  // namespace speedlab::cli
