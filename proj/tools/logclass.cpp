#include "CLI11.hpp"
#include "json.hpp"

#include "logclass/greenberg.hpp"
#include "logclass/iwasawa.hpp"
#include "logclass/scan.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace logclass;
using json = nlohmann::ordered_json;

namespace {

void print_summary(const ScanSummary & s)
{
    std::cout << "eligible    " << s.eligible_count << "\n";
    std::cout << "nontrivial  " << s.nontrivial_count << "\n";
    std::cout << "unresolved  " << s.unresolved_count << "\n";
    std::printf("ratio       %.4f\n", s.ratio);
    if (s.partial)
        std::cout << "status      PARTIAL (scan incomplete)\n";
    std::cout << "\ncl_prime_trivial  min_v  count\n";
    for (const auto & [key, n] : s.histogram)
        std::printf("%-17s %5u  %ld\n", key.first ? "yes" : "no", key.second, n);
    if (s.reference) {
        std::cout << "\nreference counts: eligible " << s.reference->expected_eligible
                  << (s.reference->eligible_match ? " (match)" : " (MISMATCH)")
                  << ", nontrivial " << s.reference->expected_nontrivial
                  << (s.reference->nontrivial_match ? " (match)" : " (MISMATCH)") << "\n";
    }
}

int exit_code(const ScanSummary & s) { return s.unresolved_count > 0 ? 2 : 0; }

/* "1,3;0,9" -> [poly(1+3T), poly(9)] with low-degree-first coefficients */
std::vector<IntPoly> parse_polys(const std::string & spec)
{
    std::vector<IntPoly> out;
    std::istringstream factors(spec);
    std::string factor;
    while (std::getline(factors, factor, ';')) {
        std::vector<mpz_class> c;
        std::istringstream coeffs(factor);
        std::string tok;
        while (std::getline(coeffs, tok, ','))
            c.emplace_back(tok);
        out.emplace_back(std::move(c));
    }
    return out;
}

LambdaModule parse_module(long ell, const std::string & elementary,
                          const std::string & finite_orders,
                          const std::string & finite_t)
{
    LambdaModule M;
    M.ell = ell;
    if (!elementary.empty())
        M.elementary = parse_polys(elementary);
    if (!finite_orders.empty()) {
        FiniteModule F;
        std::istringstream in(finite_orders);
        std::string tok;
        while (std::getline(in, tok, ','))
            F.orders.push_back((unsigned)std::stoul(tok));
        F.T_action = Mat(F.rank(), std::vector<mpz_class>(F.rank(), 0));
        if (!finite_t.empty()) {
            auto rows = parse_polys(finite_t);
            if (rows.size() != F.rank())
                throw CLI::ValidationError("--finite-t must have one row per order");
            for (size_t i = 0; i < rows.size(); ++i)
                for (size_t j = 0; j < rows[i].c.size(); ++j)
                    F.T_action[i][j] = rows[i].c[j];
        }
        M.finite = std::move(F);
    }
    validate(M);
    return M;
}

json poly_json(const IntPoly & p)
{
    json a = json::array();
    for (const auto & c : p.c)
        a.push_back(c.get_str());
    return a;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"logarithmic class group scanner for real quadratic fields"};
    app.require_subcommand(1);

    ScanConfig cfg;
    auto * scan = app.add_subcommand("scan", "decide the criterion for every eligible field below a bound");
    scan->add_option("--ell", cfg.ell, "odd split prime")->capture_default_str();
    scan->add_option("--bound", cfg.bound, "exclusive upper bound on m")->capture_default_str();
    scan->add_option("--precision", cfg.precision_start, "starting ell-adic precision")->capture_default_str();
    scan->add_option("--precision-cap", cfg.precision_cap, "give up (mark unresolved) past this precision")->capture_default_str();
    scan->add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();
    scan->add_option("--out", cfg.out_path, "output path (default: stdout)");
    scan->add_option("--format", cfg.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
    scan->add_flag("--resume", cfg.resume, "continue an interrupted jsonl scan in place");
    scan->add_option("--stop-after", cfg.stop_after, "stop cleanly after N new records (testing aid)");

    long check_m = 0, check_ell = 3;
    unsigned check_prec = 16;
    auto * check = app.add_subcommand("check", "verbose report for a single field");
    check->add_option("--m", check_m, "squarefree m > 1")->required();
    check->add_option("--ell", check_ell, "odd split prime")->capture_default_str();
    check->add_option("--precision", check_prec, "starting ell-adic precision")->capture_default_str();

    std::string in_path;
    auto * summ = app.add_subcommand("summarize", "recompute statistics from a jsonl record file");
    summ->add_option("--in", in_path, "jsonl file written by scan")->required();

    auto * lambda = app.add_subcommand("lambda", "Iwasawa module toolkit");
    lambda->require_subcommand(1);
    long lam_ell = 3, lam_n = 1, lam_n0 = -1, lam_m = -1;
    std::string elementary, finite_orders, finite_t;
    auto add_module_opts = [&](CLI::App * sub) {
        sub->add_option("--ell", lam_ell, "odd prime")->capture_default_str();
        sub->add_option("--elementary", elementary,
                        "semicolon-separated factors, comma-separated coefficients low-first, e.g. \"3,1;9\"");
        sub->add_option("--finite-orders", finite_orders, "cyclic orders a_i of the finite part, e.g. \"1,2\"");
        sub->add_option("--finite-t", finite_t, "rows of the T-action on the finite part, e.g. \"0,0;3,0\"");
    };

    auto * om = lambda->add_subcommand("omega", "coefficients of omega_n or omega_n/omega_n0");
    om->add_option("--ell", lam_ell)->capture_default_str();
    om->add_option("--n", lam_n)->required();
    om->add_option("--n0", lam_n0, "when given, emit the quotient omega_n/omega_n0");

    auto * herb = lambda->add_subcommand("herbrand", "invariant/coinvariant orders and pseudo-nullity");
    add_module_opts(herb);
    auto * inv = lambda->add_subcommand("invariants", "mu, lambda, nu from the growth of |M/omega_n M|");
    add_module_opts(inv);
    auto * cap = lambda->add_subcommand("capitulation", "kernel exponent of M/omega_n M -> M/omega_m M");
    add_module_opts(cap);
    cap->add_option("--n", lam_n, "source level")->capture_default_str();
    cap->add_option("--m", lam_m, "target level (default: stabilized limit)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*scan) {
            auto s = run_scan(cfg);
            print_summary(s);
            return exit_code(s);
        }
        if (*check) {
            GrasReport r;
            try {
                r = gras_criterion(check_m, check_ell, check_prec);
            } catch (const precision_cap_exceeded &) {
                std::cout << "m=" << check_m << " ell=" << check_ell
                          << ": unresolved (precision cap exceeded)\n";
                return 2;
            }
            std::cout << record_to_jsonl(r) << "\n";
            std::cout << "m=" << r.m << " ell=" << r.ell << ": "
                      << (r.log_class_trivial ? "log class group TRIVIAL (criterion satisfied)"
                                              : "log class group NONTRIVIAL")
                      << "\n  h=" << r.h << " h_narrow=" << r.h_narrow
                      << " h_ell=" << r.h_ell << " ord[l]=" << r.ord_l
                      << "\n  v(Log eps)=" << r.v_eps << " v(Log pi)=" << r.v_pi
                      << " min=" << r.min_v
                      << "\n  cl' trivial=" << (r.cl_prime_trivial ? "yes" : "no")
                      << " bp torsion=" << r.bp_total
                      << " precision used=" << r.precision_used << "\n";
            return 0;
        }
        if (*summ) {
            auto s = summarize(in_path);
            print_summary(s);
            return exit_code(s);
        }
        if (*om) {
            auto p = lam_n0 >= 0 ? omega_quotient(lam_n, lam_n0, lam_ell)
                                 : omega(lam_n, lam_ell);
            std::cout << poly_json(p).dump() << "\n";
            return 0;
        }
        auto M = parse_module(lam_ell, elementary, finite_orders, finite_t);
        json out;
        if (*herb) {
            auto h = herbrand(M);
            out["inv_order"] = h.inv_order.get_str();
            out["coinv_order"] = h.coinv_order.get_str();
            out["pseudo_null"] = h.pseudo_null;
        } else if (*inv) {
            auto iv = iwasawa_invariants(M);
            out["mu"] = iv.mu;
            out["lambda"] = iv.lambda;
            out["nu"] = iv.nu;
            auto chi = char_poly(M);
            out["char_poly"] = poly_json(chi);
        } else if (*cap) {
            long e = lam_m >= 0 ? capitulation_kernel(M, lam_n, lam_m)
                                : stabilized_kernel(M, lam_n);
            out["kernel_exponent"] = e;
            out["ell"] = lam_ell;
        }
        std::cout << out.dump() << "\n";
        return 0;
    } catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
