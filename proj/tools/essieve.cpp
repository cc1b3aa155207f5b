// Command-line front end: decomposition, filter generation, wheel
// construction, filter ordering and verification runs.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "essieve/sieve.hpp"

namespace {

using namespace ess;

std::string triple_str(const UnitFractionTriple& t) {
    return "4/" + std::to_string(t.n) + " = 1/" + to_string_u128(t.x1) + " + 1/" +
           to_string_u128(t.x2) + " + 1/" + to_string_u128(t.x3);
}

std::vector<u64> parse_u64_list(const std::string& s) {
    std::vector<u64> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoull(tok));
    return out;
}

// Accepts a plain decimal bound, scientific notation with an integral
// mantissa (resolved exactly: 5e9 = 5 * 10^9), or K=<count> for a raw
// k-range length.
SieveLimit parse_limit(const std::string& s) {
    if (s.rfind("K=", 0) == 0 || s.rfind("k=", 0) == 0)
        return SieveLimit::k_count(std::stoull(s.substr(2)));
    auto epos = s.find_first_of("eE");
    if (epos == std::string::npos) return SieveLimit::max_n(std::stoull(s));
    u64 mantissa = std::stoull(s.substr(0, epos));
    u64 exponent = std::stoull(s.substr(epos + 1));
    u128 v = mantissa;
    for (u64 i = 0; i < exponent; ++i) {
        v *= 10;
        if (v > ~static_cast<u64>(0)) throw CLI::ValidationError("--limit exceeds 64 bits");
    }
    return SieveLimit::max_n(static_cast<u64>(v));
}

unsigned default_threads() {
    if (const char* env = std::getenv("ESSIEVE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::vector<u64> load_mods_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<u64> out;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::stringstream ss(line);
        std::string tok;
        while (ss >> tok) {
            for (char& c : tok)
                if (c == ',') c = ' ';
            std::stringstream ts(tok);
            u64 v;
            while (ts >> v) out.push_back(v);
        }
    }
    if (out.empty()) throw FormatError(path + ": no moduli");
    return out;
}

int cmd_decompose(u64 n, bool all, const std::string& method) {
    if (method == "closed") {
        auto t = closed_form_decompose(n);
        if (!t) {
            std::cout << "no closed form applies to " << n << "\n";
            return 0;
        }
        std::cout << triple_str(*t) << "\n";
        return 0;
    }
    if (method == "brute") {
        auto ts = brute_force_decompose(n, all);
        if (ts.empty()) {
            std::cout << "no decomposition of 4/" << n << " into three distinct unit fractions\n";
            return 0;
        }
        for (const auto& t : ts) std::cout << triple_str(t) << "\n";
        if (!all) std::cout << "(lexicographically smallest; use --all for the full set)\n";
        return 0;
    }
    // equations
    if (n < 3 || n % 2 == 0) throw CLI::ValidationError("--method=equations needs odd n >= 3");
    if (all) {
        auto sols = decompose_all_via_equations(n);
        for (const auto& s : sols)
            std::cout << triple_str(s.triple) << "   [" << describe(s.cert) << ", A=" << s.quad.A
                      << " B=" << s.quad.B << " C=" << s.quad.C << " D=" << s.quad.D << "]\n";
        std::cout << sols.size() << " decomposition(s) via the reference equations\n";
        return 0;
    }
    auto s = decompose_first_via_equations(n);
    if (!s) {
        std::cout << "no reference equation certifies " << n << "\n";
        return 0;
    }
    std::cout << triple_str(s->triple) << "   [" << describe(s->cert) << "]\n";
    return 0;
}

int cmd_filter(u64 m, bool shortened, const std::string& out_path) {
    FilterSet fs;
    std::string line;
    if (shortened) {
        auto sf = shorten(m, [&](u64 q) -> const Filter& { return fs.get(q); });
        line = detail::format_filter_line(sf.m, sf.residues);
        if (!out_path.empty()) save_shortened_filters(out_path, {sf});
    } else {
        const Filter& f = fs.get(m);
        line = detail::format_filter_line(f.m, f.residues);
        if (!out_path.empty()) save_filters(out_path, {f});
    }
    std::cout << line << "\n";
    return 0;
}

int cmd_wheel(const std::string& primes_csv, const std::string& policy_str,
              const std::string& out_path) {
    FilterSet fs;
    Wheel w = build_wheel(parse_u64_list(primes_csv), ReductionPolicy::parse(policy_str), fs);
    std::cout << "G=" << w.G << " primes=" << primes_csv << " policy=" << w.policy.to_string()
              << "\n";
    std::cout << "residues: " << w.residues.size() << ", mean gap " << mean_gap(w).num;
    if (mean_gap(w).den != 1) std::cout << "/" << mean_gap(w).den;
    std::cout << "\n";
    if (!out_path.empty()) {
        save_wheel(out_path, w);
        std::cout << "wrote " << out_path << "\n";
    } else {
        for (u64 r : w.residues) std::cout << r << "\n";
    }
    return 0;
}

int cmd_order_mods(const std::string& candidates_file, const std::string& sample_spec,
                   const std::string& wheel_file, const std::string& out_path) {
    auto cands = load_mods_file(candidates_file);
    auto colon = sample_spec.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--sample-k must be <begin>:<end>");
    KRange sample{std::stoull(sample_spec.substr(0, colon)),
                  std::stoull(sample_spec.substr(colon + 1))};
    FilterSet fs;
    Wheel w = wheel_file.empty() ? build_default_wheel(fs) : load_wheel(wheel_file);
    auto ordered = order_mods(cands, sample, w, fs);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw IoError("cannot open for writing: " + out_path);
        out = &file;
    }
    for (std::size_t i = 0; i < ordered.size(); ++i)
        *out << ordered[i] << (i + 1 == ordered.size() ? "\n" : ", ");
    std::cout << ordered.size() << " of " << cands.size() << " moduli kept\n";
    return 0;
}

int cmd_verify(const std::string& limit_str, const std::string& wheel_file,
               const std::string& mods_file, const std::string& filters_file, unsigned threads,
               u64 chunk_size, const std::string& checkpoint, const std::string& report_path) {
    SieveConfig cfg;
    cfg.filters = std::make_shared<FilterSet>();
    if (!filters_file.empty())
        for (auto& f : load_filters(filters_file)) cfg.filters->put(std::move(f));
    std::cerr << "building filters and wheel...\n";
    cfg.wheel = wheel_file.empty() ? build_default_wheel(*cfg.filters) : load_wheel(wheel_file);
    cfg.mods = mods_file.empty() ? default_mod_list() : load_mods_file(mods_file);
    cfg.limit = parse_limit(limit_str);
    cfg.threads = threads;
    cfg.chunk_size = chunk_size;
    cfg.checkpoint_path = checkpoint;
    cfg.progress = [](u64 done, u64 total) {
        std::cerr << "progress: k=" << done << "/" << total << " ("
                  << (total ? 100.0 * static_cast<double>(done) / static_cast<double>(total) : 100)
                  << "%)\n";
    };
    auto rep = verify_range(cfg);
    print_report(std::cout, rep);
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw IoError("cannot open for writing: " + report_path);
        out << report_kv(rep);
        std::cout << "report written to " << report_path << "\n";
    }
    return rep.counterexample_count() > 0 ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Erdos-Straus conjecture verification engine"};
    app.require_subcommand(1);

    u64 n = 0;
    bool all = false;
    std::string method = "brute";
    auto* dec = app.add_subcommand("decompose", "decompose 4/n into three distinct unit fractions");
    dec->add_option("n", n, "denominator")->required();
    dec->add_flag("--all", all, "list every decomposition instead of one");
    dec->add_option("--method", method, "closed | equations | brute (default brute)")
        ->check(CLI::IsMember({"closed", "equations", "brute"}));

    u64 m = 0;
    bool shortened = false;
    std::string out_path;
    auto* flt = app.add_subcommand("filter", "compute the modular filter S_m");
    flt->add_option("m", m, "odd modulus")->required();
    flt->add_flag("--shortened", shortened, "compute the shortened filter S*_m");
    flt->add_option("--out", out_path, "write the filter to a file");

    std::string primes_csv = "5,7,11,13,17,19,23";
    std::string policy_str = "primes";
    std::string wheel_out;
    auto* whl = app.add_subcommand("wheel", "build a progression wheel (G, R)");
    whl->add_option("--primes", primes_csv, "comma-separated odd primes");
    whl->add_option("--policy", policy_str,
                    "primes | all-odd-divisors | custom:q1,q2,... (reduction filters)");
    whl->add_option("--out", wheel_out, "write the wheel to a file");

    std::string candidates_file, sample_spec = "0:64", order_wheel_file, order_out;
    auto* ord = app.add_subcommand("order-mods", "greedy-order filter moduli by efficiency");
    ord->add_option("--candidates-file", candidates_file, "file with candidate moduli")->required();
    ord->add_option("--sample-k", sample_spec, "k sample interval, <begin>:<end>");
    ord->add_option("--wheel-file", order_wheel_file, "wheel to sample (default: built-in)");
    ord->add_option("--out", order_out, "write the ordered list to a file");

    std::string limit_str, verify_wheel_file, mods_file, filters_file, checkpoint, report_path;
    unsigned threads = default_threads();
    u64 chunk_size = 64;
    auto* ver = app.add_subcommand("verify", "sieve all candidates up to a bound");
    ver->add_option("--limit", limit_str, "max n (e.g. 1e12) or K=<count> of wheel blocks")
        ->required();
    ver->add_option("--wheel-file", verify_wheel_file, "wheel file (default: built-in 7-prime wheel)");
    ver->add_option("--mods-file", mods_file, "filter moduli in order (default: built-in list)");
    ver->add_option("--filters-file", filters_file, "precomputed filters to load");
    ver->add_option("--threads", threads, "worker threads (default: $ESSIEVE_THREADS or cores)");
    ver->add_option("--chunk-size", chunk_size, "k blocks per work unit");
    ver->add_option("--checkpoint", checkpoint, "checkpoint file for resume");
    ver->add_option("--report", report_path, "write a machine-readable report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dec->parsed()) return cmd_decompose(n, all, method);
        if (flt->parsed()) return cmd_filter(m, shortened, out_path);
        if (whl->parsed()) return cmd_wheel(primes_csv, policy_str, wheel_out);
        if (ord->parsed()) return cmd_order_mods(candidates_file, sample_spec, order_wheel_file, order_out);
        if (ver->parsed())
            return cmd_verify(limit_str, verify_wheel_file, mods_file, filters_file, threads,
                              chunk_size, checkpoint, report_path);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
