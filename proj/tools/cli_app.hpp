// tools/cli_app.hpp: the chainlab command line, callable in-process.
//
// Every command builds an ordered JSON document and one of three renderers
// prints it: `json` verbatim, `human` as "key: value" lines, `csv` as a table.
// Exact values are objects {c, m, scale, approx}; human and csv show the
// 6-place decimal, json keeps the exact triple next to it.

#pragma once

#include "chainlab/chainlab.hpp"
#include "chainlab/catalog_io.hpp"
#include "chainlab/schonhage_constant.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace chainlab::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kViolation = 2;
inline constexpr int kBudget = 3;

enum class Format { Human, Json, Csv };

struct RunConfig {
    std::string class_name = "all";
    std::uint64_t budget = kDefaultBudget;
    unsigned horizon = 16;
    std::string cache_path;
    Format format = Format::Human;
    unsigned threads = 1;
};

/// Result of one command: the document, the key of its row list (for csv) and the exit status.
struct Output {
    Json doc = Json::object();
    std::string table;
    int status = kOk;
    /// Replaces the generic csv rendering when set.
    std::optional<std::string> csv;
};

inline int verify_exit_code(const BoundReport& report) {
    if (!report.violations.empty()) {
        return kViolation;
    }
    return report.unchecked.empty() ? kOk : kBudget;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline Json exact_json(const ExactLogValue& v) {
    Json j;
    j["c"] = v.c;
    j["m"] = v.m.str();
    j["scale"] = v.scale;
    j["approx"] = to_decimal(v);
    return j;
}

inline bool is_exact(const Json& j) {
    return j.is_object() && j.contains("c") && j.contains("m") && j.contains("scale") && j.contains("approx");
}

inline std::string scalar_text(const Json& j) {
    if (j.is_string()) {
        return j.get<std::string>();
    }
    if (j.is_null()) {
        return "-";
    }
    if (is_exact(j)) {
        const std::int64_t e = j["c"].get<std::int64_t>() + j["scale"].get<std::int64_t>();
        const std::string m = j["m"].get<std::string>();
        const std::string exact = m == "1" ? std::to_string(e) : std::to_string(e) + " - log2 " + m;
        return j["approx"].get<std::string>() + " (" + exact + ")";
    }
    if (j.is_array()) {
        std::string out = "(";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += (i ? "," : "") + scalar_text(j[i]);
        }
        return out + ")";
    }
    return j.dump();
}

inline bool is_leaf(const Json& j) {
    if (!j.is_structured() || is_exact(j)) {
        return true;
    }
    if (j.is_array()) {
        for (const auto& x : j) {
            if (x.is_structured() && !is_exact(x)) {
                return false;
            }
        }
        return true;
    }
    return false;
}

inline void render_human(const Json& doc, std::ostream& out, const std::string& indent = "") {
    for (const auto& [key, value] : doc.items()) {
        if (is_leaf(value)) {
            out << indent << key << ": " << scalar_text(value) << '\n';
        } else if (value.is_array()) {
            out << indent << key << ":\n";
            for (const auto& row : value) {
                out << indent << " ";
                for (const auto& [k, v] : row.items()) {
                    out << ' ' << k << '=' << scalar_text(v);
                }
                out << '\n';
            }
        } else {
            out << indent << key << ":\n";
            render_human(value, out, indent + "  ");
        }
    }
}

inline std::string csv_field(const Json& j) {
    std::string text;
    if (is_exact(j)) {
        text = j["approx"].get<std::string>();
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            text += (i ? " " : "") + csv_field(j[i]);
        }
    } else if (j.is_string()) {
        text = j.get<std::string>();
    } else if (j.is_null()) {
        text = "";
    } else {
        text = j.dump();
    }
    if (text.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : text) {
            quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        }
        return quoted + "\"";
    }
    return text;
}

inline void render_csv_rows(const std::vector<const Json*>& rows, std::ostream& out) {
    if (rows.empty()) {
        return;
    }
    bool first = true;
    for (const auto& [key, _] : rows.front()->items()) {
        out << (first ? "" : ",") << key;
        first = false;
    }
    out << '\n';
    for (const Json* row : rows) {
        first = true;
        for (const auto& [_, value] : row->items()) {
            out << (first ? "" : ",") << csv_field(value);
            first = false;
        }
        out << '\n';
    }
}

inline void render_csv(const Output& result, std::ostream& out) {
    if (result.csv) {
        out << *result.csv;
        return;
    }
    if (!result.table.empty()) {
        std::vector<const Json*> rows;
        for (const auto& row : result.doc.at(result.table)) {
            rows.push_back(&row);
        }
        render_csv_rows(rows, out);
        return;
    }
    Json flat = Json::object();
    for (const auto& [key, value] : result.doc.items()) {
        if (is_leaf(value)) {
            flat[key] = value;
        }
    }
    render_csv_rows({&flat}, out);
}

inline Natural positive(const std::string& text, const char* what) {
    const Natural n = parse_natural(text);
    if (n == 0) {
        throw std::invalid_argument(std::string(what) + " must be positive");
    }
    return n;
}

inline Json natural_list(const std::vector<Natural>& values) {
    Json j = Json::array();
    for (const auto& v : values) {
        j.push_back(v.str());
    }
    return j;
}

inline Json defect_json(const ExactDefect& d) { return exact_json(d.value()); }

inline Json report_json(const StabilityReport& r) {
    Json doc;
    doc["n"] = r.n.str();
    doc["class"] = r.class_name;
    doc["verdict"] = to_string(r.verdict);
    doc["horizon"] = r.horizon;
    doc["drop_at"] = r.drop_at ? Json(*r.drop_at) : Json();
    doc["certified_at"] = r.certified_at ? Json(*r.certified_at) : Json();
    doc["leader"] = r.leader.str();
    doc["stable_length"] = r.stable_length;
    doc["stable_defect"] = exact_json(r.stable_defect.value());
    Json trajectory = Json::array();
    for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
        Json row;
        row["k"] = k;
        row["n"] = r.trajectory[k].n.str();
        row["length"] = r.trajectory[k].length;
        row["defect"] = defect_json(r.trajectory[k]);
        trajectory.push_back(row);
    }
    doc["trajectory"] = trajectory;
    return doc;
}

inline Json bound_report_json(const BoundReport& r, const Natural& n_max) {
    Json doc;
    doc["bound"] = r.name;
    doc["max"] = n_max.str();
    doc["checked"] = r.checked;
    doc["violation_count"] = r.violations.size();
    doc["unchecked"] = natural_list(r.unchecked);
    Json rows = Json::array();
    for (const auto& v : r.violations) {
        Json row;
        row["n"] = v.n.str();
        row["length"] = v.length;
        row["bound"] = v.bound;
        rows.push_back(row);
    }
    doc["violations"] = rows;
    return doc;
}

inline Json matches_json(const std::vector<KnuthMatch>& forms) {
    Json out = Json::array();
    for (const auto& m : forms) {
        Json row;
        row["form"] = m.form;
        row["params"] = m.params;
        out.push_back(row);
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

inline Output cmd_chain(const Natural& n, const SearchContext& ctx) {
    const SearchOutcome outcome = search_and_record(n, ctx);
    Output o;
    o.doc["n"] = n.str();
    o.doc["class"] = outcome.class_name;
    o.doc["status"] = outcome.exact() ? "exact" : "budget-exhausted";
    o.doc["length"] = outcome.length;
    o.doc["chain"] = detail::natural_list(outcome.witness.elements);
    if (outcome.exact()) {
        const ExactDefect d{outcome.length, n, outcome.class_name};
        o.doc["defect"] = detail::defect_json(d);
        o.doc["small_steps"] = ceil_defect(d);
    } else {
        o.status = kBudget;
    }
    return o;
}

inline Output cmd_defect(const Natural& n, const SearchContext& ctx) {
    const ExactDefect d = defect(n, ctx);
    Output o;
    o.doc["n"] = n.str();
    o.doc["class"] = d.class_name;
    o.doc["length"] = d.length;
    o.doc["defect"] = detail::defect_json(d);
    o.doc["small_steps"] = ceil_defect(d);
    o.doc["below_one"] = below_one(d);
    return o;
}

inline Output cmd_stability(const Natural& n, const SearchContext& ctx, unsigned horizon) {
    Output o;
    o.doc = detail::report_json(stability_probe(n, ctx, horizon));
    o.table = "trajectory";
    return o;
}

inline Output cmd_leader(const Natural& n, const SearchContext& ctx) {
    const Natural leader = leader_of(n, ctx);
    const ExactDefect d = defect(leader, ctx);
    Output o;
    o.doc["n"] = n.str();
    o.doc["class"] = d.class_name;
    o.doc["leader"] = leader.str();
    o.doc["length_of_leader"] = d.length;
    o.doc["defect"] = detail::defect_json(d);
    return o;
}

inline Output cmd_classify(const Natural& n) {
    const SmallStepsBucket b = classify_small_steps(n);
    Output o;
    o.doc["n"] = n.str();
    o.doc["ones"] = ones_count(n);
    o.doc["bucket"] = to_string(b.bucket);
    o.doc["form"] = b.primary_form();
    o.doc["forms"] = detail::matches_json(b.forms);
    return o;
}

inline Output cmd_classify_range(const Natural& lo, const Natural& hi, bool verify, const SearchContext& ctx,
                                 unsigned threads) {
    if (hi < lo) {
        throw std::invalid_argument("classify-range: HI must be at least LO");
    }
    Output o;
    o.doc["lo"] = lo.str();
    o.doc["hi"] = hi.str();
    if (verify) {
        const CrossCheckReport report = cross_check(lo, hi, ctx, threads);
        o.doc["checked"] = report.checked;
        o.doc["discrepancy_count"] = report.discrepancies.size();
        o.doc["unchecked"] = detail::natural_list(report.unchecked);
        Json rows = Json::array();
        for (const auto& d : report.discrepancies) {
            Json row;
            row["n"] = d.n.str();
            row["bucket"] = to_string(d.bucket);
            row["searched"] = d.searched >= 3 ? std::string(">=3") : std::to_string(d.searched);
            rows.push_back(row);
        }
        o.doc["discrepancies"] = rows;
        o.table = "discrepancies";
        o.status = !report.discrepancies.empty() ? kViolation : report.unchecked.empty() ? kOk : kBudget;
        return o;
    }
    Json rows = Json::array();
    for (Natural n = lo; n <= hi; ++n) {
        const SmallStepsBucket b = classify_small_steps(n);
        Json row;
        row["n"] = n.str();
        row["ones"] = ones_count(n);
        row["bucket"] = to_string(b.bucket);
        row["form"] = b.primary_form();
        rows.push_back(row);
    }
    o.doc["rows"] = rows;
    o.table = "rows";
    return o;
}

inline Output cmd_catalog(const Threshold& r, const Natural& n_max, bool probe, const SearchContext& ctx,
                          unsigned horizon) {
    CatalogOptions options;
    options.probe_stability = probe;
    options.horizon = horizon;
    const Catalog catalog = enumerate_defects(r, n_max, ctx, options);
    Output o;
    o.doc = catalog_json(catalog);
    o.table = "entries";
    o.csv = catalog_csv(catalog);
    o.status = catalog.unchecked.empty() ? kOk : kBudget;
    return o;
}

inline Output cmd_sk(unsigned k, unsigned count) {
    Output o;
    o.doc["k"] = k;
    Json rows = Json::array();
    const auto values = sk_prefix(k, count);
    for (std::size_t i = 0; i < values.size(); ++i) {
        Json row;
        row["index"] = i;
        row["value"] = detail::exact_json(values[i]);
        rows.push_back(row);
    }
    o.doc["values"] = rows;
    o.table = "values";
    return o;
}

inline Output cmd_tset(int form, unsigned cap) {
    Output o;
    o.doc["form"] = form;
    o.doc["cap"] = cap;
    Json rows = Json::array();
    for (const auto& t : t_set_values(form, cap)) {
        Json row;
        row["value"] = detail::exact_json(t.value);
        row["n"] = t.n.str();
        rows.push_back(row);
    }
    o.doc["values"] = rows;
    o.table = "values";
    return o;
}

inline Output cmd_verify(const std::string& which, const Natural& n_max, const SearchContext& ctx) {
    Output o;
    if (which == "schonhage" || which == "knuth-stolarsky") {
        const BoundReport report =
            which == "schonhage" ? verify_schonhage(n_max, ctx) : verify_knuth_stolarsky(n_max, ctx);
        o.doc = detail::bound_report_json(report, n_max);
        o.table = "violations";
        o.status = verify_exit_code(report);
        return o;
    }
    if (n_max > 64) {
        throw std::invalid_argument("scholz-brauer: --max is an exponent and must be at most 64");
    }
    bool violated = false;
    bool unchecked = false;
    Json rows = Json::array();
    for (const auto& row : verify_scholz_brauer(static_cast<unsigned>(n_max), ctx)) {
        Json j;
        j["e"] = row.exponent;
        j["checked"] = row.checked;
        j["lhs"] = row.lhs;
        j["rhs"] = row.rhs;
        j["holds"] = row.holds;
        j["slack"] = row.slack;
        rows.push_back(j);
        violated = violated || (row.checked && !row.holds);
        unchecked = unchecked || !row.checked;
    }
    o.doc["bound"] = "scholz-brauer";
    o.doc["max"] = n_max.str();
    o.doc["rows"] = rows;
    o.table = "rows";
    o.status = violated ? kViolation : unchecked ? kBudget : kOk;
    return o;
}

inline Output cmd_constant(unsigned precision) {
    const CsEnclosure cs = compute_cs(precision);
    Output o;
    o.doc["constant"] = "cs";
    o.doc["precision"] = cs.precision;
    o.doc["series_terms"] = cs.series_terms;
    o.doc["lower"] = cs.lower;
    o.doc["upper"] = cs.upper;
    o.doc["width"] = cs.width;
    o.doc["width_ok"] = cs.width_ok;
    o.doc["within_bound"] = cs.within_bound;
    return o;
}

inline Output cmd_ordinal_sum(const std::string& x, const std::string& y) {
    const OrdinalCNF a = parse_cnf(x);
    const OrdinalCNF b = parse_cnf(y);
    Output o;
    o.doc["x"] = format_cnf(a);
    o.doc["y"] = format_cnf(b);
    o.doc["sum"] = format_cnf(natural_sum(a, b));
    return o;
}

inline Output cmd_ordinal_bound(unsigned q) {
    const Rwo1Bound r = rwo1_bound(q);
    Output o;
    o.doc["q"] = q;
    o.doc["bound"] = format_cnf(r.bound);
    o.doc["first_upper"] = format_cnf(r.first_upper);
    o.doc["second_upper"] = format_cnf(r.second_upper);
    return o;
}

inline Output cmd_drop_scan(const Natural& limit, const SearchContext& ctx) {
    const DropScan scan = smallest_drop(limit, ctx);
    Output o;
    o.doc["max"] = limit.str();
    o.doc["class"] = ctx.cls.name();
    if (scan.drop) {
        o.doc["n"] = scan.drop->n.str();
        o.doc["length_n"] = scan.drop->length_n;
        o.doc["length_2n"] = scan.drop->length_2n;
        o.doc["chain_n"] = detail::natural_list(scan.drop->chain_n.elements);
        o.doc["chain_2n"] = detail::natural_list(scan.drop->chain_2n.elements);
    } else {
        o.doc["n"] = nullptr;
    }
    o.doc["unchecked"] = scan.unchecked ? Json(scan.unchecked->str()) : Json();
    if (scan.unchecked) {
        o.status = kBudget;
    }
    return o;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"chainlab: shortest addition chains, defects and their catalog"};
    app.name("chainlab");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig config;
    if (const char* env = std::getenv("CHAINLAB_CACHE")) {
        config.cache_path = env;
    }
    std::string format = "human";
    app.add_option("--class", config.class_name, "Chain class")
        ->check(CLI::IsMember({"all", "star", "binary"}))
        ->capture_default_str();
    app.add_option("--budget", config.budget, "Node budget per search")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--horizon", config.horizon, "Doublings probed for stability")->capture_default_str();
    app.add_option("--cache", config.cache_path, "Length cache CSV (default: $CHAINLAB_CACHE)");
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"human", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--threads", config.threads, "Worker threads for batch commands")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();

    std::function<Output(const SearchContext&)> action;
    std::string a1;
    std::string a2;
    std::string max_text;
    std::string bound_text;
    unsigned k = 0;
    unsigned count = 0;
    int form = 0;
    unsigned cap = 0;
    unsigned precision = 64;
    unsigned q = 0;
    bool verify = false;
    bool no_stability = false;
    std::string which;
    std::string constant_name;

    const auto number_command = [&](const char* name, const char* help, auto body) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("N", a1, "Positive integer")->required();
        sub->callback([&, body] { action = [&, body](const SearchContext& ctx) { return body(detail::positive(a1, "N"), ctx); }; });
    };
    number_command("chain", "Shortest chain, length, defect and small steps",
                   [](const Natural& n, const SearchContext& ctx) { return cmd_chain(n, ctx); });
    number_command("defect", "Exact defect", [](const Natural& n, const SearchContext& ctx) { return cmd_defect(n, ctx); });
    number_command("stability", "Stability probe under doubling", [&](const Natural& n, const SearchContext& ctx) {
        return cmd_stability(n, ctx, config.horizon);
    });
    number_command("leader", "Smallest integer sharing the defect",
                   [](const Natural& n, const SearchContext& ctx) { return cmd_leader(n, ctx); });
    number_command("classify", "Small-steps bucket from the binary expansion",
                   [](const Natural& n, const SearchContext&) { return cmd_classify(n); });

    auto* range = app.add_subcommand("classify-range", "Classify every n in [LO, HI]");
    range->add_option("LO", a1)->required();
    range->add_option("HI", a2)->required();
    range->add_flag("--verify", verify, "Cross-check against search");
    range->callback([&] {
        action = [&](const SearchContext& ctx) {
            return cmd_classify_range(detail::positive(a1, "LO"), detail::positive(a2, "HI"), verify, ctx,
                                      config.threads);
        };
    });

    auto* catalog = app.add_subcommand("catalog", "Defect values up to a bound");
    catalog->add_option("--bound", bound_text, "Threshold r (decimal)")->required();
    catalog->add_option("--max", max_text, "Largest n scanned")->required();
    catalog->add_flag("--no-stability", no_stability, "Skip stability probes of leaders");
    catalog->callback([&] {
        action = [&](const SearchContext& ctx) {
            return cmd_catalog(Threshold::parse(bound_text), detail::positive(max_text, "--max"), !no_stability, ctx,
                               config.horizon);
        };
    });

    auto* sk = app.add_subcommand("sk", "Smallest members of S_k");
    sk->add_option("--k", k, "k >= 2")->required()->check(CLI::Range(2u, 64u));
    sk->add_option("--count", count, "How many")->required();
    sk->callback([&] { action = [&](const SearchContext&) { return cmd_sk(k, count); }; });

    auto* tset = app.add_subcommand("tset", "Members of T_i with exponents up to a cap");
    tset->add_option("--form", form, "i in 1..5")->required()->check(CLI::Range(1, 5));
    tset->add_option("--cap", cap, "Exponent cap")->required()->check(CLI::Range(0u, 64u));
    tset->callback([&] { action = [&](const SearchContext&) { return cmd_tset(form, cap); }; });

    auto* ver = app.add_subcommand("verify", "Check a lower bound on all n up to --max");
    ver->add_option("BOUND", which)->required()->check(CLI::IsMember({"schonhage", "knuth-stolarsky", "scholz-brauer"}));
    ver->add_option("--max", max_text, "Largest n (exponent for scholz-brauer)")->required();
    ver->callback([&] {
        action = [&](const SearchContext& ctx) { return cmd_verify(which, detail::positive(max_text, "--max"), ctx); };
    });

    auto* constant = app.add_subcommand("constant", "Rigorous enclosure of a constant");
    constant->add_option("NAME", constant_name)->required()->check(CLI::IsMember({"cs"}));
    constant->add_option("--precision", precision, "Bits")->capture_default_str();
    constant->callback([&] { action = [&](const SearchContext&) { return cmd_constant(precision); }; });

    auto* ordinal = app.add_subcommand("ordinal", "Ordinal arithmetic in Cantor normal form");
    ordinal->require_subcommand(1);
    auto* osum = ordinal->add_subcommand("sum", "Natural sum X + Y");
    osum->add_option("X", a1)->required();
    osum->add_option("Y", a2)->required();
    osum->callback([&] { action = [&](const SearchContext&) { return cmd_ordinal_sum(a1, a2); }; });
    auto* obound = ordinal->add_subcommand("bound", "Order-type bound for defects up to Q");
    obound->add_option("Q", q)->required()->check(CLI::Range(1u, 4096u));
    obound->callback([&] { action = [&](const SearchContext&) { return cmd_ordinal_bound(q); }; });

    auto* drop = app.add_subcommand("drop-scan", "Smallest n with l(2n) = l(n)");
    drop->add_option("--max", max_text, "Largest n scanned")->required();
    drop->callback([&] {
        action = [&](const SearchContext& ctx) { return cmd_drop_scan(detail::positive(max_text, "--max"), ctx); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kError;
    }
    config.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Human;

    try {
        SearchContext ctx;
        ctx.cls = chain_class_by_name(config.class_name);
        ctx.budget = config.budget;
        std::optional<LengthCache> cache;
        std::size_t loaded = 0;
        if (!config.cache_path.empty()) {
            cache = LengthCache::open(config.cache_path);
            loaded = cache->size();
            ctx.cache = &*cache;
        }

        Output result;
        try {
            result = action(ctx);
        } catch (const BudgetExhausted& e) {
            if (cache && cache->size() != loaded) {
                cache->save();
            }
            err << "chainlab: " << e.what() << '\n';
            return kBudget;
        }
        if (cache && cache->size() != loaded) {
            cache->save();
        }

        switch (config.format) {
            case Format::Json: out << result.doc.dump(2) << '\n'; break;
            case Format::Csv: detail::render_csv(result, out); break;
            case Format::Human: detail::render_human(result.doc, out); break;
        }
        return result.status;
    } catch (const std::exception& e) {
        err << "chainlab: " << e.what() << '\n';
        return kError;
    }
}

}  // namespace chainlab::cli
