#ifndef SLIDESVM_TEXT_FORMAT_HPP
#define SLIDESVM_TEXT_FORMAT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slidesvm {

// Shortest decimal that parses back to exactly `x`.
std::string format_double(double x);

// Whole-token parses; nullopt on any trailing garbage. A leading '+' is
// accepted.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

std::vector<std::string_view> split_ws(std::string_view line);
std::vector<std::string> split_csv_list(std::string_view text);

}  // namespace slidesvm

#endif  // SLIDESVM_TEXT_FORMAT_HPP
