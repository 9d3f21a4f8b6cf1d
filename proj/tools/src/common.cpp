#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "commands.hpp"

namespace speedlab::cli {

Output::Output(const std::string& path) : out_(&std::cout) {
    if (path.empty() || path == "-") return;
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*f) throw std::runtime_error("cannot open output file: " + path);
    file_ = std::move(f);
    out_ = file_.get();
}

namespace {

long long to_int(const std::string& s) {
    long long v = 0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

}  // namespace

std::pair<Site, Site> parse_range(const std::string& text) {
    const auto colon = text.find(':', 1);
    if (colon == std::string::npos) throw std::invalid_argument("expected lo:hi, got '" + text + "'");
    const Site lo = to_int(text.substr(0, colon)), hi = to_int(text.substr(colon + 1));
    if (lo > hi) throw std::invalid_argument("range '" + text + "' has lo > hi");
    return {lo, hi};
}

std::vector<Label> parse_labels(const std::string& text) {
    std::vector<Label> out;
    if (text.find(':', 1) != std::string::npos) {
        const auto [a, b] = parse_range(text);
        for (Label n = a; n <= b; ++n) out.push_back(n);
        return out;
    }
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(to_int(item));
    if (out.empty()) throw std::invalid_argument("empty label list");
    return out;
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        double v = 0.0;
        const auto* end = item.data() + item.size();
        const auto [p, ec] = std::from_chars(item.data(), end, v);
        if (ec != std::errc() || p != end) throw std::invalid_argument("not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty number list");
    return out;
}

std::string fmt(double x) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

}  // namespace speedlab::cli
