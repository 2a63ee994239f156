#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <type_traits>

namespace corral {

// Shortest round-trip decimal form of x.
std::string format_double(double x);

// Buffered CSV file writer. Numbers are written in their shortest round-trip form so
// output bytes depend only on the values. I/O failures throw std::runtime_error naming
// the file.
class CsvWriter {
public:
    CsvWriter(std::filesystem::path path, std::initializer_list<std::string_view> header);
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;
    ~CsvWriter();

    CsvWriter& field(std::string_view text);
    CsvWriter& field(double x);
    CsvWriter& field(std::uint64_t x);
    template <class T>
        requires(std::is_integral_v<T> && !std::is_same_v<T, std::uint64_t> && !std::is_same_v<T, bool>)
    CsvWriter& field(T x) {
        return field(static_cast<std::uint64_t>(x));
    }
    void end_row();
    void flush();
    const std::filesystem::path& path() const { return path_; }

private:
    void separator();

    std::filesystem::path path_;
    std::ofstream out_;
    std::string buffer_;
    bool row_started_ = false;
};

}  // namespace corral
