// Command line surface for the finite-group coincidence toolkit.
//
// Exit codes: 0 success; 1 when the query answer is negative (Obstructed,
// NotLiftable); 2 on malformed input.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "coinc/io.hpp"
#include "coinc/xmodular.hpp"

namespace fs = std::filesystem;
using namespace coinc;

namespace {

u64 group_cap() {
    if (const char* env = std::getenv("COINC_GROUP_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v >= 2) return v;
        throw MalformedRecord("COINC_GROUP_CAP must be a positive integer");
    }
    return MatGroup::kDefaultCap;
}

void emit(bool json, const Json& j, const std::string& text) {
    if (json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int cmd_group(const std::string& action, const std::string& in, u64 to, bool json) {
    MatGroup g = load_group(in, group_cap());
    if (action == "info") {
        Json out = group_to_json(g);
        out["order"] = g.order();
        out["det_image_size"] = det_image(g).size();
        out["sl_part_order"] = sl_intersection(g).order();
        emit(json, out,
             "group mod " + std::to_string(g.modulus()) + ": order " + std::to_string(g.order()) +
                 ", det image size " + std::to_string(det_image(g).size()) + "\n");
        return 0;
    }
    if (action == "derived") {
        MatGroup d = derived_subgroup(g);
        AbelianInvariants inv = abelian_invariants(g, d);
        Json out;
        out["order"] = d.order();
        out["index"] = g.order() / d.order();
        out["abelianization"] = inv.factors;
        out["group"] = group_to_json(d);
        std::string t = "derived subgroup: order " + std::to_string(d.order()) + ", index " +
                        std::to_string(g.order() / d.order()) + ", abelianization [";
        for (std::size_t i = 0; i < inv.factors.size(); ++i)
            t += (i ? "," : "") + std::to_string(inv.factors[i]);
        t += "]\n";
        emit(json, out, t);
        return 0;
    }
    if (action == "reduce") {
        MatGroup r = reduce_group(g, to);
        Json out = group_to_json(r);
        out["order"] = r.order();
        emit(json, out,
             "reduction mod " + std::to_string(to) + ": order " + std::to_string(r.order()) +
                 "\n");
        return 0;
    }
    throw MalformedRecord("unknown group action: " + action);
}

int run_fixture(const Json& f, const fs::path& root, std::string& note);

int cmd_verify(const fs::path& root, bool json) {
    std::vector<fs::path> files;
    for (const char* dir : {"fixtures/paper", "fixtures/external"}) {
        fs::path d = root / dir;
        if (!fs::exists(d)) continue;
        for (const auto& e : fs::directory_iterator(d))
            if (e.path().extension() == ".json" && e.path().filename() != "README.json")
                files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    int pass = 0, failn = 0, skip = 0;
    Json results = Json::array();
    for (const fs::path& p : files) {
        Json f = load_json_file(p.string());
        if (f.contains("fixture_kind") && f["fixture_kind"] == "data") continue;
        if (!f.contains("kind")) continue;
        std::string id = f.value("id", p.filename().string());
        std::string note;
        int st = 2;
        try {
            st = run_fixture(f, root, note);
        } catch (const std::exception& e) {
            st = 1;
            note = e.what();
        }
        const char* verdict = st == 0 ? "PASS" : (st == 2 ? "SKIPPED" : "FAIL");
        (st == 0 ? pass : (st == 2 ? skip : failn))++;
        results.push_back({{"id", id}, {"result", verdict}, {"note", note}});
        if (!json) {
            std::cout << verdict << "  " << id;
            if (!note.empty()) std::cout << "  (" << note << ")";
            std::cout << "\n";
        }
    }
    Json summary{{"pass", pass}, {"fail", failn}, {"skipped", skip}, {"results", results}};
    if (json)
        std::cout << summary.dump(2) << "\n";
    else
        std::cout << "summary: " << pass << " passed, " << failn << " failed, " << skip
                  << " skipped\n";
    return failn == 0 ? 0 : 1;
}

bool matches(const Json& expected, const Json& actual) { return expected == actual; }

// Returns 0 pass, 1 fail, 2 skipped.
int run_fixture(const Json& f, const fs::path& root, std::string& note) {
    const std::string kind = f.at("kind").get<std::string>();
    const Json& in = f.at("input");
    const Json& exp = f.at("expected");
    const u64 cap = group_cap();
    auto check = [&](const Json& actual) {
        if (matches(exp, actual)) return 0;
        note = "expected " + exp.dump() + ", got " + actual.dump();
        return 1;
    };
    if (kind == "gl2_order") return check(Json{{"order", gl2_order(in.at("n").get<u64>())}});
    if (kind == "sl2_order") return check(Json{{"order", sl2_order(in.at("n").get<u64>())}});
    if (kind == "closure_order")
        return check(Json{{"order", parse_group(in.at("group"), cap).order()}});
    if (kind == "element_order") {
        Mat2 m = mat2(in.at("modulus").get<u64>(), in.at("mat")[0].get<i64>(),
                      in.at("mat")[1].get<i64>(), in.at("mat")[2].get<i64>(),
                      in.at("mat")[3].get<i64>());
        return check(Json{{"order", element_order(m)}});
    }
    if (kind == "derived") {
        MatGroup g = parse_group(in.at("group"), cap);
        MatGroup d = derived_subgroup(g);
        Json actual{{"order", d.order()}, {"index", g.order() / d.order()}};
        return check(actual);
    }
    if (kind == "abelianization") {
        MatGroup g = parse_group(in.at("group"), cap);
        MatGroup d = derived_subgroup(g);
        return check(Json{{"factors", abelian_invariants(g, d).factors}});
    }
    if (kind == "class_generates") {
        MatGroup g = parse_group(in.at("group"), cap);
        MatGroup d = derived_subgroup(g);
        Mat2 x = mat2(g.modulus(), in.at("mat")[0].get<i64>(), in.at("mat")[1].get<i64>(),
                      in.at("mat")[2].get<i64>(), in.at("mat")[3].get<i64>());
        return check(Json{{"generates", class_generates_quotient(g, d, x)}});
    }
    if (kind == "reduction_kernel") {
        MatGroup k = reduction_kernel(in.at("mn").get<u64>(), in.at("m").get<u64>());
        u64 expo = 1;
        for (const Mat2& x : k.elements())
            expo = std::max(expo, element_order(x));
        return check(Json{{"order", k.order()}, {"exponent", expo}});
    }
    if (kind == "lift_fibers_count") {
        Mat2 g = mat2(in.at("modulus").get<u64>(), in.at("mat")[0].get<i64>(),
                      in.at("mat")[1].get<i64>(), in.at("mat")[2].get<i64>(),
                      in.at("mat")[3].get<i64>());
        return check(Json{{"count", lift_fibers(g, in.at("to").get<u64>()).size()}});
    }
    if (kind == "element_split_liftable") {
        Mat2 g = mat2(in.at("modulus").get<u64>(), in.at("mat")[0].get<i64>(),
                      in.at("mat")[1].get<i64>(), in.at("mat")[2].get<i64>(),
                      in.at("mat")[3].get<i64>());
        ElementLiftResult r = element_split_liftable(g, in.at("to").get<u64>());
        Json actual{{"status", r.status == LiftStatus::Liftable ? "liftable" : "not_liftable"}};
        if (exp.contains("witness") && r.witness)
            actual["witness"] = {r.witness->e[0], r.witness->e[1], r.witness->e[2],
                                 r.witness->e[3]};
        return check(actual);
    }
    if (kind == "group_split_liftable") {
        MatGroup g = parse_group(in.at("group"), cap);
        GroupLiftResult r = group_split_liftable(g, in.at("to").get<u64>());
        Json actual{{"status", r.status == LiftStatus::Liftable
                                   ? "liftable"
                                   : (r.status == LiftStatus::NotLiftable ? "not_liftable"
                                                                          : "exhausted")}};
        if (exp.contains("witness_order") && r.witness)
            actual["witness_order"] = r.witness->order();
        return check(actual);
    }
    if (kind == "sequence_splits") {
        MatGroup h = parse_group(in.at("group"), cap);
        GroupLiftResult r = sequence_splits(h, in.at("m").get<u64>());
        Json actual{{"status", r.status == LiftStatus::Liftable
                                   ? "liftable"
                                   : (r.status == LiftStatus::NotLiftable ? "not_liftable"
                                                                          : "exhausted")}};
        if (exp.contains("complement_order") && r.witness)
            actual["complement_order"] = r.witness->order();
        return check(actual);
    }
    if (kind == "padic_profile") {
        Json img;
        if (in.contains("image_file")) {
            fs::path p = root / in.at("image_file").get<std::string>();
            if (!fs::exists(p)) {
                note = "external data file not supplied: " + p.string();
                return 2;
            }
            img = load_json_file(p.string());
        } else {
            img = in.at("image");
        }
        PAdicImage x = parse_image(img, cap);
        u64 kmax = in.at("kmax").get<u64>();
        IndexProfile prof = index_profile(x, kmax);
        Json actual;
        if (exp.contains("i")) actual["i"] = prof.i;
        if (exp.contains("j")) actual["j"] = prof.j;
        if (exp.contains("ell")) actual["ell"] = prof.ell;
        if (exp.contains("u")) actual["u"] = prof.u;
        if (exp.contains("coincidences"))
            actual["coincidences"] = detect_vertical_coincidences(x, kmax);
        return check(actual);
    }
    if (kind == "level_image_order") {
        PAdicImage x = parse_image(in.at("image"), cap);
        return check(Json{{"order", level_image(x, in.at("k").get<u64>()).order()}});
    }
    if (kind == "adelic_bound") {
        return check(Json{
            {"value", adelic_index_lower_bound(in.at("p").get<u64>(), in.at("k").get<u64>())}});
    }
    if (kind == "audit") {
        CurveRecord rec = parse_record(in.at("record"), cap);
        std::optional<CurveRecord> rec2;
        if (in.contains("record2")) rec2 = parse_record(in.at("record2"), cap);
        ObstructionReport rep = audit(in.at("m").get<u64>(), in.at("n").get<u64>(), rec,
                                      rec2 ? &*rec2 : nullptr);
        Json actual;
        actual["overall"] = rep.obstructed() ? "Obstructed" : "NotObstructed";
        if (exp.contains("findings")) {
            Json fm = Json::object();
            for (const auto& [rule, verdict] : exp.at("findings").items()) {
                for (const Finding& fd : rep.findings)
                    if (fd.rule == rule) {
                        fm[rule] = to_string(fd.verdict);
                        break;
                    }
                (void)verdict;
            }
            actual["findings"] = fm;
        }
        return check(actual);
    }
    if (kind == "xcurve_eval") {
        auto j = j_of_t(rational_from_string(in.at("t").get<std::string>()));
        Json actual;
        if (j)
            actual["j"] = coinc::to_string(*j);
        else
            actual["pole"] = true;
        return check(actual);
    }
    if (kind == "xcurve_search") {
        std::vector<Rational> targets;
        for (const Json& t : in.at("targets"))
            targets.push_back(rational_from_string(t.get<std::string>()));
        auto res = search_preimages(targets, in.at("height").get<u64>());
        Json actual = Json::object();
        for (const auto& [tgt, ts] : res) {
            Json list = Json::array();
            for (const Rational& t : ts) list.push_back(coinc::to_string(t));
            actual[coinc::to_string(tgt)] = list;
        }
        return check(actual);
    }
    note = "unknown fixture kind: " + kind;
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"toolkit for division-field coincidence obstructions"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "machine-readable JSON output");

    auto* grp = app.add_subcommand("group", "inspect a matrix group file");
    std::string grp_action = "info", grp_in;
    u64 grp_to = 2;
    grp->add_option("action", grp_action, "info | derived | reduce");
    grp->add_option("--in", grp_in, "group JSON file")->required();
    grp->add_option("--to", grp_to, "target modulus for reduce");

    auto* lift = app.add_subcommand("lift", "split-liftability searches");
    lift->require_subcommand(1);
    auto* lsplit = lift->add_subcommand("split", "split lift of a group");
    std::string ls_group;
    u64 ls_to = 0, ls_budget = kDefaultLiftBudget;
    lsplit->add_option("--group", ls_group, "group JSON file")->required();
    lsplit->add_option("--to", ls_to, "target modulus")->required();
    lsplit->add_option("--budget", ls_budget, "search budget in closure operations");
    auto* lcomp = lift->add_subcommand("complement", "complement of a reduction kernel");
    std::string lc_group;
    u64 lc_m = 0, lc_budget = kDefaultLiftBudget;
    lcomp->add_option("--group", lc_group, "overgroup JSON file")->required();
    lcomp->add_option("--m", lc_m, "base modulus")->required();
    lcomp->add_option("--budget", lc_budget, "search budget in closure operations");
    auto* lelem = lift->add_subcommand("element", "order-preserving lift of one matrix");
    std::vector<i64> le_mat;
    u64 le_mod = 0, le_to = 0;
    lelem->add_option("--mat", le_mat, "entries a b c d")->expected(4)->required();
    lelem->add_option("--mod", le_mod, "base modulus")->required();
    lelem->add_option("--to", le_to, "target modulus")->required();

    auto* pad = app.add_subcommand("padic", "index sequences of a p-adic image");
    std::string pd_image;
    u64 pd_kmax = 4;
    pad->add_option("--image", pd_image, "image JSON file")->required();
    pad->add_option("--kmax", pd_kmax, "highest level");

    auto* aud = app.add_subcommand("audit", "run the obstruction rule deck on a query");
    u64 au_m = 0, au_n = 0;
    std::string au_rec, au_rec2;
    aud->add_option("--m", au_m)->required();
    aud->add_option("--n", au_n)->required();
    aud->add_option("--record", au_rec, "curve record JSON file")->required();
    aud->add_option("--record2", au_rec2, "second curve record (two-curve query)");

    auto* xc = app.add_subcommand("xcurve", "the degree-8 map to the j-line");
    xc->require_subcommand(1);
    auto* xeval = xc->add_subcommand("eval", "evaluate at one parameter");
    std::string xe_t;
    xeval->add_option("--t", xe_t, "parameter as a/b")->required();
    auto* xsearch = xc->add_subcommand("search", "scan bounded-height parameters");
    u64 xs_height = 30;
    std::string xs_targets;
    xsearch->add_option("--height", xs_height, "height bound");
    xsearch->add_option("--targets", xs_targets, "JSON array of target j-values")->required();

    auto* verify = app.add_subcommand("verify-paper", "re-derive the fixture corpus");
    std::string vr_root = ".";
    verify->add_option("--root", vr_root, "repository root containing fixtures/");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*grp) return cmd_group(grp_action, grp_in, grp_to, json);
        if (*lsplit) {
            GroupLiftResult r =
                group_split_liftable(load_group(ls_group, group_cap()), ls_to, ls_budget);
            std::string txt = std::string("split lift: ") +
                              lift_report_to_json(r)["status"].get<std::string>();
            if (r.witness) txt += ", witness order " + std::to_string(r.witness->order());
            emit(json, lift_report_to_json(r), txt + "\n");
            return r.status == LiftStatus::Liftable ? 0 : 1;
        }
        if (*lcomp) {
            GroupLiftResult r =
                sequence_splits(load_group(lc_group, group_cap()), lc_m, lc_budget);
            std::string txt = std::string("complement: ") +
                              lift_report_to_json(r)["status"].get<std::string>();
            if (r.witness) txt += ", order " + std::to_string(r.witness->order());
            emit(json, lift_report_to_json(r), txt + "\n");
            return r.status == LiftStatus::Liftable ? 0 : 1;
        }
        if (*lelem) {
            Mat2 m = mat2(le_mod, le_mat[0], le_mat[1], le_mat[2], le_mat[3]);
            ElementLiftResult r = element_split_liftable(m, le_to);
            std::string txt = std::string("element lift: ") +
                              lift_report_to_json(r)["status"].get<std::string>();
            if (r.witness) txt += ", witness " + to_string(*r.witness);
            emit(json, lift_report_to_json(r), txt + "\n");
            return r.status == LiftStatus::Liftable ? 0 : 1;
        }
        if (*pad) {
            PAdicImage x = load_image(pd_image, group_cap());
            IndexProfile prof = index_profile(x, pd_kmax);
            std::vector<u64> cs = detect_vertical_coincidences(x, pd_kmax);
            Json out = profile_to_json(prof, cs);
            std::string txt = "p = " + std::to_string(prof.p) + "\n  i = " +
                              Json(prof.i).dump() + "\n  j = " + Json(prof.j).dump() +
                              "\n  ell = " + Json(prof.ell).dump() + "\n  u = " +
                              Json(prof.u).dump() + "\n  coincidences at levels " +
                              Json(cs).dump() + "\n";
            emit(json, out, txt);
            return 0;
        }
        if (*aud) {
            CurveRecord rec = load_record(au_rec, group_cap());
            std::optional<CurveRecord> rec2;
            if (!au_rec2.empty()) rec2 = load_record(au_rec2, group_cap());
            ObstructionReport rep = audit(au_m, au_n, rec, rec2 ? &*rec2 : nullptr);
            emit(json, report_to_json(rep), report_to_text(rep));
            return rep.obstructed() ? 1 : 0;
        }
        if (*xeval) {
            auto j = j_of_t(rational_from_string(xe_t));
            Json out;
            if (j)
                out["j"] = coinc::to_string(*j);
            else
                out["pole"] = true;
            emit(json, out, j ? ("j = " + coinc::to_string(*j) + "\n") : "pole\n");
            return 0;
        }
        if (*xsearch) {
            Json tj = load_json_file(xs_targets);
            std::vector<Rational> targets;
            for (const Json& t : tj)
                targets.push_back(rational_from_string(
                    t.is_string() ? t.get<std::string>() : t.dump()));
            auto res = search_preimages(targets, xs_height);
            Json out = Json::object();
            std::string txt;
            for (const auto& [tgt, ts] : res) {
                Json list = Json::array();
                for (const Rational& t : ts) list.push_back(coinc::to_string(t));
                out[coinc::to_string(tgt)] = list;
                txt += coinc::to_string(tgt) + ": " + list.dump() + "\n";
            }
            emit(json, out, txt);
            return 0;
        }
        if (*verify) return cmd_verify(vr_root, json);
    } catch (const MalformedRecord& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BadModulus& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotInvertible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
