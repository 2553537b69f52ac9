#include "logclass/scan.hpp"

#include "json.hpp"

#include <condition_variable>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace logclass {

using ordered_json = nlohmann::ordered_json;

std::vector<long> enumerate_fields(long ell, long bound)
{
    std::vector<long> out;
    if (bound <= 2)
        return out;
    // squarefree sieve up to bound
    std::vector<bool> squarefree(static_cast<size_t>(bound), true);
    for (long d = 2; d * d < bound; ++d)
        for (long k = d * d; k < bound; k += d * d)
            squarefree[static_cast<size_t>(k)] = false;
    for (long m = 2; m < bound; ++m) {
        if (!squarefree[static_cast<size_t>(m)])
            continue;
        if (m % ell == 0)
            continue; // ramified
        if (!splits(m, ell))
            continue;
        out.push_back(m);
    }
    return out;
}

static ordered_json record_to_json(const GrasReport & r)
{
    ordered_json j;
    j["m"] = r.m;
    j["ell"] = r.ell;
    j["precision_used"] = r.precision_used;
    j["escalations"] = r.escalations;
    j["h"] = r.h;
    j["h_narrow"] = r.h_narrow;
    j["h_ell"] = r.h_ell;
    j["ord_l"] = r.ord_l;
    j["class_order_l"] = r.class_order_l;
    j["cl_prime_trivial"] = r.cl_prime_trivial;
    j["wild_trivial"] = r.wild_trivial;
    j["v_eps"] = r.v_eps;
    j["v_pi"] = r.v_pi;
    j["min_v"] = r.min_v;
    j["log_class_trivial"] = r.log_class_trivial;
    j["bp_unit_exponent"] = r.bp_unit_exponent;
    j["bp_total"] = r.bp_total;
    j["level1_norm_index_exponent"] = r.level1_norm_index_exponent;
    j["unresolved"] = r.unresolved;
    return j;
}

std::string record_to_jsonl(const GrasReport & r)
{
    return record_to_json(r).dump();
}

GrasReport record_from_jsonl(const std::string & line)
{
    ordered_json j = ordered_json::parse(line);
    GrasReport r;
    r.m = j.at("m").get<long>();
    r.ell = j.at("ell").get<long>();
    r.precision_used = j.at("precision_used").get<unsigned>();
    r.escalations = j.at("escalations").get<unsigned>();
    r.h = j.at("h").get<long>();
    r.h_narrow = j.at("h_narrow").get<long>();
    r.h_ell = j.at("h_ell").get<long>();
    r.ord_l = j.at("ord_l").get<long>();
    r.class_order_l = j.at("class_order_l").get<long>();
    r.cl_prime_trivial = j.at("cl_prime_trivial").get<bool>();
    r.wild_trivial = j.at("wild_trivial").get<bool>();
    r.v_eps = j.at("v_eps").get<unsigned>();
    r.v_pi = j.at("v_pi").get<unsigned>();
    r.min_v = j.at("min_v").get<unsigned>();
    r.log_class_trivial = j.at("log_class_trivial").get<bool>();
    r.bp_unit_exponent = j.at("bp_unit_exponent").get<unsigned>();
    r.bp_total = j.at("bp_total").get<long>();
    r.level1_norm_index_exponent = j.at("level1_norm_index_exponent").get<int>();
    r.unresolved = j.at("unresolved").get<bool>();
    return r;
}

std::string csv_header()
{
    return "m,ell,precision_used,escalations,h,h_narrow,h_ell,ord_l,"
           "class_order_l,cl_prime_trivial,wild_trivial,v_eps,v_pi,min_v,"
           "log_class_trivial,bp_unit_exponent,bp_total,"
           "level1_norm_index_exponent,unresolved";
}

std::string record_to_csv(const GrasReport & r)
{
    std::ostringstream s;
    s << r.m << ',' << r.ell << ',' << r.precision_used << ','
      << r.escalations << ',' << r.h << ',' << r.h_narrow << ',' << r.h_ell
      << ',' << r.ord_l << ',' << r.class_order_l << ','
      << int(r.cl_prime_trivial) << ',' << int(r.wild_trivial) << ','
      << r.v_eps << ',' << r.v_pi << ',' << r.min_v << ','
      << int(r.log_class_trivial) << ',' << r.bp_unit_exponent << ','
      << r.bp_total << ',' << r.level1_norm_index_exponent << ','
      << int(r.unresolved);
    return s.str();
}

/* re-validated at write time */
static void check_record(const GrasReport & r)
{
    if (r.unresolved)
        return;
    if (r.min_v < 1 || r.min_v != std::min(r.v_eps, r.v_pi))
        throw scan_error("scan: record violates min_v invariant");
    if (r.log_class_trivial != (r.cl_prime_trivial && r.min_v == 1))
        throw scan_error("scan: record violates verdict invariant");
}

static void tally(ScanSummary & s, const GrasReport & r)
{
    ++s.eligible_count;
    if (r.unresolved) {
        ++s.unresolved_count;
        return;
    }
    if (!r.log_class_trivial)
        ++s.nontrivial_count;
    ++s.histogram[{ r.cl_prime_trivial, r.min_v }];
}

static void finish_summary(ScanSummary & s, std::optional<long> bound)
{
    s.ratio = s.eligible_count
                  ? double(s.nontrivial_count) / double(s.eligible_count)
                  : 0.0;
    struct Row {
        long bound, eligible, nontrivial;
    };
    static const Row table[] = { { 10000, 2256, 237 },
                                 { 100000, 22793, 2801 },
                                 { 1000000, 227953, 30747 } };
    if (bound)
        for (const Row & row : table)
            if (row.bound == *bound)
                s.reference = ReferenceComparison{ row.eligible, row.nontrivial,
                                           s.eligible_count == row.eligible,
                                           s.nontrivial_count ==
                                               row.nontrivial };
}

static GrasReport compute_one(long m, const ScanConfig & cfg)
{
    try {
        return gras_criterion(m, cfg.ell, cfg.precision_start,
                              cfg.precision_cap);
    } catch (const precision_cap_exceeded &) {
        GrasReport r;
        r.m = m;
        r.ell = cfg.ell;
        r.precision_used = cfg.precision_cap;
        r.unresolved = true;
        return r;
    }
}

ScanSummary run_scan(const ScanConfig & config)
{
    if (config.format != "jsonl" && config.format != "csv")
        throw scan_error("scan: unknown format " + config.format);
    if (config.resume && config.format != "jsonl")
        throw scan_error("scan: resume requires the jsonl format");
    if (config.resume && config.out_path.empty())
        throw scan_error("scan: resume requires an output file");

    std::vector<long> fields = enumerate_fields(config.ell, config.bound);

    // resume: keep the longest prefix of well-formed records matching the
    // enumeration order, truncate anything beyond it
    size_t start = 0;
    ScanSummary summary;
    if (config.resume) {
        std::ifstream in(config.out_path);
        std::vector<std::string> keep;
        std::string line;
        while (in && std::getline(in, line)) {
            if (start >= fields.size())
                break;
            GrasReport r;
            try {
                r = record_from_jsonl(line);
            } catch (const nlohmann::json::exception &) {
                break;
            }
            if (r.m != fields[start] || r.ell != config.ell)
                break;
            keep.push_back(line);
            tally(summary, r);
            ++start;
        }
        in.close();
        std::ofstream out(config.out_path, std::ios::trunc);
        for (const auto & l : keep)
            out << l << '\n';
        if (!out)
            throw scan_error("scan: cannot rewrite " + config.out_path);
    }

    std::ofstream file;
    std::ostream * out = &std::cout;
    if (!config.out_path.empty()) {
        file.open(config.out_path, config.resume ? std::ios::app
                                                 : std::ios::trunc);
        if (!file)
            throw scan_error("scan: cannot open " + config.out_path);
        out = &file;
    }
    if (config.format == "csv" && start == 0)
        *out << csv_header() << '\n';

    size_t stop = fields.size();
    if (config.stop_after > 0)
        stop = std::min(stop, start + static_cast<size_t>(config.stop_after));

    // dynamic queue over fields; single writer drains a reorder buffer
    std::mutex mu;
    std::condition_variable cv;
    std::map<size_t, GrasReport> ready;
    size_t next_claim = start;
    std::exception_ptr failure;

    int jobs = std::max(1, config.jobs);
    auto worker = [&]() {
        for (;;) {
            size_t idx;
            {
                std::lock_guard<std::mutex> lk(mu);
                if (failure || next_claim >= stop)
                    return;
                idx = next_claim++;
            }
            try {
                GrasReport r = compute_one(fields[idx], config);
                std::lock_guard<std::mutex> lk(mu);
                ready.emplace(idx, std::move(r));
                cv.notify_all();
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                failure = std::current_exception();
                cv.notify_all();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i)
        pool.emplace_back(worker);

    size_t next_write = start;
    {
        std::unique_lock<std::mutex> lk(mu);
        while (next_write < stop) {
            cv.wait(lk, [&] {
                return failure || ready.count(next_write) > 0;
            });
            if (failure)
                break;
            GrasReport r = std::move(ready.begin()->second);
            ready.erase(ready.begin());
            lk.unlock();
            check_record(r);
            *out << (config.format == "jsonl" ? record_to_jsonl(r)
                                              : record_to_csv(r))
                 << '\n';
            out->flush();
            if (!*out) {
                std::lock_guard<std::mutex> g(mu);
                failure = std::make_exception_ptr(
                    scan_error("scan: write failed (resume to continue)"));
                break;
            }
            tally(summary, r);
            ++next_write;
            lk.lock();
        }
    }
    for (auto & t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);

    finish_summary(summary, config.stop_after > 0
                                ? std::nullopt
                                : std::optional<long>(config.bound));
    summary.partial = config.stop_after > 0 && stop < fields.size();
    return summary;
}

ScanSummary summarize(const std::string & records_path)
{
    std::ifstream in(records_path);
    if (!in)
        throw scan_error("scan: cannot open " + records_path);
    ScanSummary s;
    std::string line;
    long lineno = 0;
    long ell = 0;
    long last_m = 0;
    std::vector<long> ms;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        if (lineno == 1 && line == csv_header())
            throw scan_error("scan: summarize expects jsonl records");
        GrasReport r;
        try {
            r = record_from_jsonl(line);
        } catch (const nlohmann::json::exception &) {
            if (in.peek() == EOF) {
                // trailing partial line from an interrupted writer
                s.partial = true;
                break;
            }
            throw malformed_record(lineno);
        }
        tally(s, r);
        ell = r.ell;
        last_m = r.m;
        ms.push_back(r.m);
    }
    // interior gaps relative to the eligibility sequence mean the file is
    // a fragment rather than a complete prefix scan
    if (ell != 0) {
        std::vector<long> expect = enumerate_fields(ell, last_m + 1);
        if (expect != ms)
            s.partial = true;
    }
    finish_summary(s, std::nullopt);
    return s;
}

} // namespace logclass
