#include "coinc/io.hpp"

#include <fstream>

namespace coinc {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw MalformedRecord("field '" + field + "': " + why);
}

u64 get_u64(const Json& j, const std::string& field) {
    if (!j.contains(field)) fail(field, "missing");
    const Json& v = j.at(field);
    if (!v.is_number_unsigned()) fail(field, "expected a non-negative integer");
    return v.get<u64>();
}

Mat2 parse_mat(const Json& j, u64 modulus, const std::string& field) {
    if (!j.is_array() || j.size() != 4) fail(field, "expected an array of 4 integers");
    i64 e[4];
    for (int i = 0; i < 4; ++i) {
        if (!j[i].is_number_integer()) fail(field, "matrix entries must be integers");
        e[i] = j[i].get<i64>();
    }
    return mat2(modulus, e[0], e[1], e[2], e[3]);
}

template <typename F> auto with_file_context(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const MalformedRecord& e) {
        throw MalformedRecord(path + ": " + e.what());
    } catch (const BadModulus& e) {
        throw MalformedRecord(path + ": " + e.what());
    } catch (const NotInvertible& e) {
        throw MalformedRecord(path + ": " + e.what());
    }
}

} // namespace

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedRecord(path + ": cannot open file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw MalformedRecord(path + ": " + e.what());
    }
}

MatGroup parse_group(const Json& j, u64 cap) {
    u64 modulus = get_u64(j, "modulus");
    if (!j.contains("generators")) fail("generators", "missing");
    const Json& gens = j.at("generators");
    if (!gens.is_array() || gens.empty()) fail("generators", "expected a nonempty array");
    std::vector<Mat2> ms;
    for (const Json& g : gens) ms.push_back(parse_mat(g, modulus, "generators"));
    return MatGroup::closure(modulus, std::move(ms), cap);
}

MatGroup load_group(const std::string& path, u64 cap) {
    return with_file_context(path, [&] { return parse_group(load_json_file(path), cap); });
}

Json group_to_json(const MatGroup& g) {
    Json out;
    out["modulus"] = g.modulus();
    out["generators"] = Json::array();
    for (const Mat2& m : g.generators())
        out["generators"].push_back({m.e[0], m.e[1], m.e[2], m.e[3]});
    return out;
}

PAdicImage parse_image(const Json& j, u64 cap) {
    u64 p = get_u64(j, "p");
    u64 depth = get_u64(j, "depth");
    if (!j.contains("group")) fail("group", "missing");
    MatGroup g = parse_group(j.at("group"), cap);
    return make_padic_image(p, depth, std::move(g));
}

PAdicImage load_image(const std::string& path, u64 cap) {
    return with_file_context(path, [&] { return parse_image(load_json_file(path), cap); });
}

Json image_to_json(const PAdicImage& x) {
    Json out;
    out["p"] = x.p;
    out["depth"] = x.depth;
    out["group"] = group_to_json(x.base_group);
    return out;
}

namespace {

ReductionType parse_reduction(const Json& j) {
    if (!j.contains("type")) fail("reduction.type", "missing");
    std::string t = j.at("type").get<std::string>();
    ReductionType rt;
    if (t == "good")
        rt.kind = ReductionKind::Good;
    else if (t == "mult_split")
        rt.kind = ReductionKind::MultSplit;
    else if (t == "mult_nonsplit")
        rt.kind = ReductionKind::MultNonSplit;
    else if (t == "additive")
        rt.kind = ReductionKind::Additive;
    else
        fail("reduction.type", "unknown reduction type '" + t + "'");
    if (j.contains("supersingular")) rt.supersingular = j.at("supersingular").get<bool>();
    if (j.contains("potentially_good"))
        rt.potentially_good = j.at("potentially_good").get<bool>();
    return rt;
}

Json reduction_to_json(const ReductionType& rt) {
    Json out;
    switch (rt.kind) {
    case ReductionKind::Good: out["type"] = "good"; break;
    case ReductionKind::MultSplit: out["type"] = "mult_split"; break;
    case ReductionKind::MultNonSplit: out["type"] = "mult_nonsplit"; break;
    case ReductionKind::Additive: out["type"] = "additive"; break;
    }
    if (rt.supersingular) out["supersingular"] = *rt.supersingular;
    if (rt.potentially_good) out["potentially_good"] = *rt.potentially_good;
    return out;
}

std::vector<u64> parse_u64_list(const Json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array");
    std::vector<u64> out;
    for (const Json& v : j) {
        if (!v.is_number_unsigned()) fail(field, "entries must be non-negative integers");
        out.push_back(v.get<u64>());
    }
    return out;
}

} // namespace

CurveRecord parse_record(const Json& j, u64 cap) {
    CurveRecord rec;
    if (j.contains("field_disc_primes"))
        rec.field_disc_primes = parse_u64_list(j.at("field_disc_primes"), "field_disc_primes");
    if (j.contains("conductor_norm_primes"))
        rec.conductor_norm_primes =
            parse_u64_list(j.at("conductor_norm_primes"), "conductor_norm_primes");
    if (j.contains("local")) {
        for (const Json& l : j.at("local")) {
            LocalData ld;
            ld.residue_characteristic = get_u64(l, "residue_characteristic");
            if (!l.contains("ideals")) fail("local.ideals", "missing");
            for (const Json& id : l.at("ideals")) {
                IdealData d;
                d.e = id.contains("e") ? get_u64(id, "e") : 1;
                if (!id.contains("reduction")) fail("local.ideals.reduction", "missing");
                d.reduction = parse_reduction(id.at("reduction"));
                if (id.contains("v_ideal_of_j"))
                    d.v_ideal_of_j = id.at("v_ideal_of_j").get<i64>();
                ld.ideals.push_back(std::move(d));
            }
            rec.local.push_back(std::move(ld));
        }
    }
    if (j.contains("cm")) rec.cm = CMData{j.at("cm").at("field_is_K_of_j").get<bool>()};
    if (j.contains("cyclotomic_trivial")) {
        for (const Json& c : j.at("cyclotomic_trivial")) {
            CyclotomicEntry e;
            e.p = get_u64(c, "p");
            if (c.contains("k")) e.k = get_u64(c, "k");
            if (c.contains("trivial")) e.trivial = c.at("trivial").get<bool>();
            if (c.contains("r")) e.r = get_u64(c, "r");
            rec.cyclotomic_trivial.push_back(e);
        }
    }
    if (j.contains("zeta_in_F")) rec.zeta_in_F = parse_u64_list(j.at("zeta_in_F"), "zeta_in_F");
    if (j.contains("images")) {
        for (const auto& [key, val] : j.at("images").items()) {
            u64 level = 0;
            try {
                level = std::stoull(key);
            } catch (const std::exception&) {
                fail("images", "level key '" + key + "' is not an integer");
            }
            rec.images.emplace(level, parse_group(val, cap));
        }
    }
    if (j.contains("entanglement_set"))
        rec.entanglement_set = parse_u64_list(j.at("entanglement_set"), "entanglement_set");
    if (j.contains("j_cube_root_in_F"))
        rec.j_cube_root_in_F = j.at("j_cube_root_in_F").get<bool>();
    validate_record(rec);
    return rec;
}

CurveRecord load_record(const std::string& path, u64 cap) {
    return with_file_context(path, [&] { return parse_record(load_json_file(path), cap); });
}

Json record_to_json(const CurveRecord& rec) {
    Json out;
    out["field_disc_primes"] = rec.field_disc_primes;
    out["conductor_norm_primes"] = rec.conductor_norm_primes;
    out["local"] = Json::array();
    for (const LocalData& ld : rec.local) {
        Json l;
        l["residue_characteristic"] = ld.residue_characteristic;
        l["ideals"] = Json::array();
        for (const IdealData& id : ld.ideals) {
            Json d;
            d["e"] = id.e;
            d["reduction"] = reduction_to_json(id.reduction);
            if (id.v_ideal_of_j) d["v_ideal_of_j"] = *id.v_ideal_of_j;
            l["ideals"].push_back(std::move(d));
        }
        out["local"].push_back(std::move(l));
    }
    if (rec.cm) out["cm"] = {{"field_is_K_of_j", rec.cm->field_is_K_of_j}};
    out["cyclotomic_trivial"] = Json::array();
    for (const CyclotomicEntry& c : rec.cyclotomic_trivial) {
        Json e;
        e["p"] = c.p;
        if (c.k) e["k"] = *c.k;
        if (c.trivial) e["trivial"] = *c.trivial;
        if (c.r) e["r"] = *c.r;
        out["cyclotomic_trivial"].push_back(std::move(e));
    }
    out["zeta_in_F"] = rec.zeta_in_F;
    out["images"] = Json::object();
    for (const auto& [level, g] : rec.images)
        out["images"][std::to_string(level)] = group_to_json(g);
    if (rec.entanglement_set) out["entanglement_set"] = *rec.entanglement_set;
    if (rec.j_cube_root_in_F) out["j_cube_root_in_F"] = *rec.j_cube_root_in_F;
    return out;
}

Json report_to_json(const ObstructionReport& rep) {
    Json out;
    out["m"] = rep.m;
    out["n"] = rep.n;
    out["two_curves"] = rep.two_curves;
    out["overall"] = rep.obstructed() ? "Obstructed" : "NotObstructed";
    out["findings"] = Json::array();
    for (const Finding& f : rep.findings)
        out["findings"].push_back({{"rule", f.rule},
                                   {"verdict", to_string(f.verdict)},
                                   {"detail", f.detail},
                                   {"citation", f.citation}});
    return out;
}

std::string report_to_text(const ObstructionReport& rep) {
    std::string out = "query (" + std::to_string(rep.m) + ", " + std::to_string(rep.n) + ")" +
                      (rep.two_curves ? " [two curves]" : "") + ": " +
                      (rep.obstructed() ? "Obstructed" : "NotObstructed") + "\n";
    for (const Finding& f : rep.findings) {
        out += "  " + f.citation + ": " + to_string(f.verdict);
        if (!f.detail.empty()) out += " (" + f.detail + ")";
        out += "\n";
    }
    return out;
}

Json profile_to_json(const IndexProfile& prof, const std::vector<u64>& coincidences) {
    Json out;
    out["p"] = prof.p;
    out["i"] = prof.i;
    out["j"] = prof.j;
    out["ell"] = prof.ell;
    out["u"] = prof.u;
    out["coincidences"] = coincidences;
    return out;
}

namespace {

const char* status_str(LiftStatus s) {
    switch (s) {
    case LiftStatus::Liftable: return "liftable";
    case LiftStatus::NotLiftable: return "not_liftable";
    default: return "exhausted";
    }
}

} // namespace

Json lift_report_to_json(const GroupLiftResult& r) {
    Json out;
    out["status"] = status_str(r.status);
    out["search_count"] = r.search_count;
    if (r.witness) {
        out["witness"] = group_to_json(*r.witness);
        out["witness_order"] = r.witness->order();
    }
    return out;
}

Json lift_report_to_json(const ElementLiftResult& r) {
    Json out;
    out["status"] = status_str(r.status);
    out["search_count"] = r.search_count;
    if (r.witness)
        out["witness"] = {r.witness->e[0], r.witness->e[1], r.witness->e[2], r.witness->e[3]};
    return out;
}

} // namespace coinc
