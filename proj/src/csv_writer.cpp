#include "corral/csv_writer.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace corral {

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::filesystem::path path, std::initializer_list<std::string_view> header)
    : path_(std::move(path)), out_(path_, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open " + path_.string() + " for writing");
    for (auto name : header) field(name);
    end_row();
}

CsvWriter::~CsvWriter() {
    try {
        flush();
    } catch (...) {
    }
}

void CsvWriter::separator() {
    if (row_started_) buffer_.push_back(',');
    row_started_ = true;
}

CsvWriter& CsvWriter::field(std::string_view text) {
    separator();
    if (text.find_first_of(",\"\n") == std::string_view::npos) {
        buffer_.append(text);
        return *this;
    }
    buffer_.push_back('"');
    for (char ch : text) {
        if (ch == '"') buffer_.push_back('"');
        buffer_.push_back(ch);
    }
    buffer_.push_back('"');
    return *this;
}

CsvWriter& CsvWriter::field(double x) {
    separator();
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    buffer_.append(buf.data(), res.ptr);
    return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t x) {
    separator();
    std::array<char, 24> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    buffer_.append(buf.data(), res.ptr);
    return *this;
}

void CsvWriter::end_row() {
    buffer_.push_back('\n');
    row_started_ = false;
    if (buffer_.size() > (1u << 20)) flush();
}

void CsvWriter::flush() {
    if (buffer_.empty()) return;
    out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    buffer_.clear();
    out_.flush();
    if (!out_) throw std::runtime_error("write failed for " + path_.string());
}

}  // namespace corral
