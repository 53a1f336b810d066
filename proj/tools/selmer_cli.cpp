#include "selmer/constants.hpp"
#include "selmer/densities.hpp"
#include "selmer/families.hpp"
#include "selmer/isogeny.hpp"
#include "selmer/parallel.hpp"
#include "selmer/report.hpp"
#include "selmer/statistics.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace selmer;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
    return s;
}

const Family& need_family(const Registry& reg, const std::string& id) {
    if (!reg.has(id)) throw UsageError("unknown family '" + id + "'; valid families: " + join(reg.ids()));
    return reg.get(id);
}

void need_kernel(const Family& g, const std::string& phi) {
    auto ks = g.kernels();
    if (std::find(ks.begin(), ks.end(), phi) == ks.end())
        throw UsageError("family " + g.id + " has no kernel '" + phi + "'; valid kernels: " +
                         (ks.empty() ? std::string("none") : join(ks)));
}

mpz_class parse_height(const std::string& s) {
    mpz_class v;
    if (s.empty() || v.set_str(s, 10) != 0 || v < 1) throw UsageError("height must be a positive integer, got '" + s + "'");
    return v;
}

void emit(const json& j, const std::string& out) {
    std::string text = dump(j);
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Selmer ratio statistics for torsion families of elliptic curves"};
    app.require_subcommand(1);
    unsigned workers = default_workers();
    std::string errata = "apply", data_path = Registry::default_data_path();
    app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--errata", errata, "apply the data errata or use the data as printed")
        ->check(CLI::IsMember({"apply", "printed"}));
    app.add_option("--data", data_path, "family data file");

    std::string out;
    std::string family, phi;

    auto* vd = app.add_subcommand("verify-densities", "census every density table against its formulas");
    long qmax = 0, qmin = 5, ml_qmax = 13;
    int ml_depth = 3;
    bool all_records = false;
    vd->add_option("--qmax", qmax, "largest prime")->required()->check(CLI::PositiveNumber);
    vd->add_option("--qmin", qmin, "smallest prime");
    vd->add_option("--family", family);
    vd->add_option("--phi", phi);
    vd->add_option("--multilevel-depth", ml_depth)->check(CLI::Range(1, 4));
    vd->add_option("--multilevel-qmax", ml_qmax);
    vd->add_flag("--all-records", all_records, "include passing records");
    vd->add_option("--out", out);

    auto* vc = app.add_subcommand("verify-constants", "derive the mean and variance constants of every printed row");
    vc->add_option("--family", family);
    vc->add_option("--out", out);

    auto* vdisc = app.add_subcommand("verify-discriminants", "base-model and Velu discriminants against the tables");
    int samples = 100, example_samples = 20;
    long range = 50;
    std::uint64_t seed = 1;
    vdisc->add_option("--samples", samples)->required()->check(CLI::PositiveNumber);
    vdisc->add_option("--example-samples", example_samples)->check(CLI::PositiveNumber);
    vdisc->add_option("--range", range)->check(CLI::PositiveNumber);
    vdisc->add_option("--seed", seed);
    vdisc->add_option("--family", family);
    vdisc->add_option("--out", out);

    auto* velu = app.add_subcommand("velu-check", "Velu quotient of one kernel against its discriminant row");
    velu->add_option("--family", family)->required();
    velu->add_option("--phi", phi)->required();
    velu->add_option("--samples", samples)->required()->check(CLI::PositiveNumber);
    velu->add_option("--range", range)->check(CLI::PositiveNumber);
    velu->add_option("--seed", seed);
    velu->add_option("--out", out);

    auto* en = app.add_subcommand("enumerate", "curves of the family up to a height bound");
    std::string height;
    long margin = 2;
    bool with_curves = false;
    en->add_option("--family", family)->required();
    en->add_option("--height", height)->required();
    en->add_option("--margin", margin)->check(CLI::PositiveNumber);
    en->add_flag("--curves", with_curves, "list the curves");
    en->add_option("--out", out);

    auto* st = app.add_subcommand("stats", "empirical distribution of the logarithmic Selmer ratio");
    long prime_cap = 0;
    std::string subgroup, mode = "pseudo", curves_out;
    std::vector<long> freq_primes{5, 7, 11, 13};
    st->add_option("--family", family)->required();
    st->add_option("--phi", phi)->required();
    st->add_option("--height", height)->required();
    st->add_option("--prime-cap", prime_cap)->check(CLI::PositiveNumber);
    st->add_option("--subgroup", subgroup, "residues a1,a2,... of a subgroup of the units mod m");
    st->add_option("--margin", margin)->check(CLI::PositiveNumber);
    st->add_option("--mode", mode, "ratio rule for degree-2 steps")->check(CLI::IsMember({"pseudo", "exact"}));
    st->add_option("--frequency-primes", freq_primes)->delimiter(',');
    st->add_option("--curves-out", curves_out, "per-curve CSV");
    st->add_option("--out", out);

    auto* au = app.add_subcommand("audit", "every printed constants row against its derivation");
    au->add_option("--out", out);

    auto* er = app.add_subcommand("errata", "data errata and the issues they resolve");
    er->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Registry reg = Registry::load(data_path, errata == "printed" ? ErrataMode::printed : ErrataMode::apply);

        if (vd->parsed()) {
            VerifyOptions opt;
            opt.q_min = qmin;
            opt.q_max = qmax;
            opt.multilevel_depth = ml_depth;
            opt.multilevel_q_max = ml_qmax;
            opt.workers = workers;
            if (!family.empty()) {
                need_family(reg, family);
                opt.family = family;
            }
            DensityReport rep;
            if (!phi.empty()) {
                opt.phi = phi;
                std::vector<std::string> fams;
                for (const auto& g : reg.families()) {
                    if (opt.family && g.id != *opt.family) continue;
                    auto ks = g.kernels();
                    if (std::find(ks.begin(), ks.end(), phi) != ks.end()) fams.push_back(g.id);
                }
                if (opt.family) need_kernel(reg.get(*opt.family), phi);
                if (fams.empty()) throw UsageError("no family has a kernel '" + phi + "'");
                rep.q_max = qmax;
                for (const auto& id : fams) {
                    opt.family = id;
                    auto r = verify_tables(reg, opt);
                    rep.checks.insert(rep.checks.end(), r.checks.begin(), r.checks.end());
                    rep.identities.insert(rep.identities.end(), r.identities.begin(), r.identities.end());
                    rep.multilevel.insert(rep.multilevel.end(), r.multilevel.begin(), r.multilevel.end());
                }
            } else {
                rep = verify_tables(reg, opt);
            }
            emit(to_json(rep, all_records), out);
            return rep.failures() == 0 ? 0 : 1;
        }

        if (vc->parsed()) {
            if (!family.empty()) need_family(reg, family);
            auto rows = verify_constants(reg, family.empty() ? std::nullopt : std::optional<std::string>(family));
            json arr = json::array();
            long mismatched = 0, flagged = 0;
            for (const auto& v : rows) {
                json r = to_json(v.derived);
                r["status"] = v.status;
                r["differing"] = v.differing;
                arr.push_back(r);
                mismatched += v.status == "mismatch";
                flagged += v.status == "flagged";
            }
            emit({{"rows", rows.size()}, {"mismatched", mismatched}, {"flagged", flagged}, {"constants", arr}}, out);
            return mismatched == 0 ? 0 : 1;
        }

        if (vdisc->parsed()) {
            if (!family.empty()) need_family(reg, family);
            json checks = json::array(), skipped = json::array();
            bool ok = true;
            for (const auto& g : reg.families()) {
                if (!family.empty() && g.id != family) continue;
                if (!g.base_model) {
                    skipped.push_back({{"family", g.id}, {"reason", "no base model with a marked point"}});
                    continue;
                }
                std::vector<std::string> ks{"O"};
                for (const auto& k : g.kernels()) ks.push_back(k);
                for (const auto& k : ks) {
                    auto r = dual_discriminant_check(g, k, samples, seed, range);
                    ok = ok && r.ok();
                    json j = to_json(r);
                    j["check"] = "discriminant";
                    checks.push_back(j);
                }
                for (const auto& [k, m] : g.example_models) {
                    (void)m;
                    auto r = example_model_check(g, k, example_samples, seed, range);
                    ok = ok && r.ok();
                    json j = to_json(r);
                    j["check"] = "example model";
                    checks.push_back(j);
                }
            }
            emit({{"pass", ok}, {"samples", samples}, {"range", range}, {"seed", seed}, {"checks", checks},
                  {"skipped", skipped}},
                 out);
            return ok ? 0 : 1;
        }

        if (velu->parsed()) {
            const auto& g = need_family(reg, family);
            if (phi != "O") need_kernel(g, phi);
            if (!g.base_model) throw UsageError(g.id + " has no base model with a marked point");
            auto r = dual_discriminant_check(g, phi, samples, seed, range);
            emit(to_json(r), out);
            return r.ok() ? 0 : 1;
        }

        if (en->parsed()) {
            const auto& g = need_family(reg, family);
            auto s = enumerate_family(g, parse_height(height), {margin, workers});
            emit(to_json(s, with_curves), out);
            return 0;
        }

        if (st->parsed()) {
            const auto& g = need_family(reg, family);
            need_kernel(g, phi);
            StatsOptions opt;
            opt.margin = margin;
            opt.workers = workers;
            opt.mode = mode == "exact" ? RatioMode::exact : RatioMode::pseudo;
            opt.frequency_primes = freq_primes;
            if (prime_cap > 0) opt.prime_cap = prime_cap;
            if (!subgroup.empty()) {
                std::vector<long> sg;
                std::stringstream in(subgroup);
                std::string tok;
                while (std::getline(in, tok, ',')) {
                    try {
                        sg.push_back(mod_floor(std::stol(tok), g.modulus));
                    } catch (const std::exception&) {
                        throw UsageError("bad residue '" + tok + "' in --subgroup");
                    }
                }
                std::sort(sg.begin(), sg.end());
                sg.erase(std::unique(sg.begin(), sg.end()), sg.end());
                if (!is_subgroup(sg, g.modulus))
                    throw UsageError("--subgroup is not a subgroup of the units mod " + std::to_string(g.modulus));
                opt.subgroup = sg;
            }
            opt.keep_curves = !curves_out.empty();
            auto r = report(g, phi, parse_height(height), opt);
            emit(to_json(r), out);
            if (!curves_out.empty()) {
                std::ofstream f(curves_out, std::ios::binary);
                if (!f) throw std::runtime_error("cannot write " + curves_out);
                f << curves_csv(r);
            }
            return 0;
        }

        if (au->parsed()) {
            emit(to_json(audit_paper_tables(reg)), out);
            return 0;
        }

        if (er->parsed()) {
            Registry printed = Registry::load(data_path, ErrataMode::printed);
            json errs = json::array(), issues = json::array();
            bool ok = true;
            for (const auto& e : printed.errata()) errs.push_back(to_json(e));
            for (const auto& i : printed.issues()) {
                json j = to_json(i);
                bool doc = issue_documented(i, printed.errata());
                j["documented"] = doc;
                ok = ok && doc;
                issues.push_back(j);
            }
            emit({{"errata", errs}, {"issues_as_printed", issues}, {"all_documented", ok}}, out);
            return ok ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
