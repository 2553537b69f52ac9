#ifndef LOGCLASS_SCAN_HPP
#define LOGCLASS_SCAN_HPP

#include "logclass/greenberg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace logclass {

struct scan_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct malformed_record : scan_error {
    long line;
    explicit malformed_record(long line_)
        : scan_error("scan: malformed record at line " + std::to_string(line_)),
          line(line_)
    {
    }
};

struct ScanConfig {
    long ell = 3;
    long bound = 10000; // exclusive upper bound on m
    unsigned precision_start = 16;
    unsigned precision_cap = 1024;
    int jobs = 1;
    std::string out_path;  // empty = stdout
    std::string format = "jsonl"; // jsonl | csv
    bool resume = false;
    long stop_after = 0; // stop cleanly after that many new records (0 = all)
};

/* squarefree m in [2, bound) where ell splits, in increasing order */
std::vector<long> enumerate_fields(long ell, long bound);

struct ReferenceComparison {
    long expected_eligible;
    long expected_nontrivial;
    bool eligible_match;
    bool nontrivial_match;
};

struct ScanSummary {
    long eligible_count = 0;
    long nontrivial_count = 0;
    long unresolved_count = 0;
    double ratio = 0.0; // nontrivial / eligible
    // (cl_prime_trivial, min_v) -> field count
    std::map<std::pair<bool, unsigned>, long> histogram;
    bool partial = false;
    std::optional<ReferenceComparison> reference;
};

/* fixed-order serialization used by both run_scan and summarize */
std::string record_to_jsonl(const GrasReport & r);
std::string csv_header();
std::string record_to_csv(const GrasReport & r);
GrasReport record_from_jsonl(const std::string & line);

ScanSummary run_scan(const ScanConfig & config);
ScanSummary summarize(const std::string & records_path);

} // namespace logclass

#endif
