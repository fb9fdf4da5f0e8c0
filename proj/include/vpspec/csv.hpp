#ifndef VPSPEC_CSV_HPP
#define VPSPEC_CSV_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace vpspec {

/// CSV writer with fixed 17-significant-digit scientific notation so that
/// identical configurations reproduce byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path);
    }

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            out_ << (i ? "," : "") << cols[i];
        out_ << "\n";
    }

    void row(const std::vector<double>& vals, const std::string& flag = "") {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.16e", vals[i]);
            out_ << (i ? "," : "") << buf;
        }
        if (!flag.empty()) out_ << "," << flag;
        out_ << "\n";
    }

    void comment(const std::string& line) { out_ << "# " << line << "\n"; }

private:
    std::ofstream out_;
};

} // namespace vpspec

#endif
