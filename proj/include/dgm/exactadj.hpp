#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dgm/em.hpp"

namespace dgm {

struct ExactAdjResult {
    VerdictReport report;
    std::shared_ptr<EmCategory> modules;
    std::vector<ObjId> free_objects;
    std::vector<ObjId> cone_objects;
};

/// Builds the module category on free modules of the samples, checks G F = M,
/// the adjunction triangles in H^0, and closure under shifts and cones of
/// closed degree-0 module morphisms. Extra modules are included in the
/// adjunction and faithfulness checks.
inline ExactAdjResult exactadj_pipeline(const PretrMonad& PM, std::vector<ObjId> samples = {},
                                        const std::vector<ModuleObject>& extra = {}, std::size_t cones_per_pair = 2) {
    Stopwatch sw;
    const auto& P = *PM.cat;
    const Field f = P.field();
    ExactAdjResult out{VerdictReport("exactadj " + PM.name, f.name()), std::make_shared<EmCategory>(PM), {}, {}};
    auto& rep = out.report;
    if (samples.empty()) samples = base_singles(P);
    const auto weak = check_weak_monad(PM, samples);
    rep.merge(weak, "monad.");
    if (!weak.passed()) {
        rep.seconds = sw.seconds();
        return out;
    }
    auto& E = *out.modules;
    for (ObjId x : samples) out.free_objects.push_back(E.add(free_module(PM, x)));
    std::vector<ObjId> extra_ids;
    json wx = nullptr;
    for (const auto& m : extra) {
        if (!check_module(PM, m, NatMode::strict).passed()) {
            if (wx.is_null()) wx = json{{"object", P.object_name(m.x)}};
            continue;
        }
        extra_ids.push_back(E.add(m));
    }
    rep.add("extra_modules_valid", wx.is_null(), "", wx);

    json wgf = nullptr;
    for (std::size_t a = 0; a < samples.size() && wgf.is_null(); ++a) {
        if (E.module(out.free_objects[a]).x != PM.apply(samples[a])) wgf = json{{"object", P.object_name(samples[a])}};
        for (std::size_t b = 0; b < samples.size() && wgf.is_null(); ++b) {
            const auto& h = P.hom(samples[a], samples[b]);
            for (std::size_t i = 0; i < h.dim(); ++i) {
                const Vector Mf = PM.M.apply(samples[a], samples[b], Vector::unit(f, h.dim(), i));
                if (!E.em_hom(out.free_objects[a], out.free_objects[b]).contains(Mf)) {
                    wgf = json{{"source", P.object_name(samples[a])}, {"target", P.object_name(samples[b])}, {"basis", i}};
                    break;
                }
            }
        }
    }
    rep.add("GF_equals_M", wgf.is_null(), "forgetful o free agrees with M on objects and morphisms", wgf);

    std::vector<ObjId> d_samples = out.free_objects;
    d_samples.insert(d_samples.end(), extra_ids.begin(), extra_ids.end());

    json wcone = nullptr, wtri = nullptr, wshift = nullptr, wcontr = nullptr;
    json witnesses = json::array();
    for (ObjId a : out.free_objects)
        for (ObjId b : out.free_objects) {
            const auto& H = E.em_hom(a, b);
            const auto z = detail::cocycles(H.space, 0);
            for (std::size_t k = 0; k < z.size() && k < cones_per_pair; ++k) {
                const Vector phi = H.to_ambient(z[k]);
                const auto c = em_cone(PM, E.module(a), E.module(b), phi);
                if (!check_module(PM, c.cone, NatMode::strict).passed()) {
                    if (wcone.is_null()) wcone = json{{"source", E.object_name(a)}, {"target", E.object_name(b)}};
                    continue;
                }
                const ObjId cid = E.add(c.cone);
                out.cone_objects.push_back(cid);
                const bool tri = is_module_morphism(PM, E.module(b), c.cone, c.triangle.inclusion) &&
                                 is_module_morphism(PM, c.cone, c.source_shifted, c.triangle.projection);
                if (!tri && wtri.is_null()) wtri = json{{"source", E.object_name(a)}, {"target", E.object_name(b)}};
                witnesses.push_back(json{{"source", E.object_name(a)},
                                         {"target", E.object_name(b)},
                                         {"morphism", to_json(phi)},
                                         {"cone", P.object_name(c.cone.x)}});
            }
        }
    for (ObjId a : out.free_objects) {
        const auto& m = E.module(a);
        const auto s1 = em_shift(PM, m, 1);
        const auto back = em_shift(PM, s1, -1);
        if ((!check_module(PM, s1, NatMode::strict).passed() || !(back == m)) && wshift.is_null())
            wshift = json{{"object", E.object_name(a)}};
        const auto c = em_cone(PM, m, m, P.identity(m.x));
        const ObjId cid = E.add(c.cone);
        const auto& H = E.em_hom(cid, cid);
        if (!is_coboundary(H.space, H.from_ambient(P.identity(c.cone.x)), 0).found() && wcontr.is_null())
            wcontr = json{{"object", E.object_name(a)}};
    }
    rep.add("cones_are_modules", wcone.is_null(), "", wcone);
    rep.add("triangle_maps_are_module_morphisms", wtri.is_null(), "", wtri);
    rep.add("shifts_are_modules", wshift.is_null(), "", wshift);
    rep.add("cone_of_identity_contractible", wcontr.is_null(), "", wcontr);
    d_samples.insert(d_samples.end(), out.cone_objects.begin(), out.cone_objects.end());

    rep.merge(check_adjunction_h0(free_forgetful(out.modules, samples, d_samples), "adjunction"), "adjunction.");

    json faith = json::array();
    for (ObjId m : d_samples) {
        const auto& H = E.em_hom(m, m);
        const CohomologyBasis cb(H.space, 0);
        std::size_t killed = 0;
        for (const auto& r : cb.representatives())
            if (is_null_homotopic(P, E.module(m).x, E.module(m).x, H.to_ambient(r))) ++killed;
        faith.push_back(json{{"module", E.object_name(m)}, {"h0_end", cb.dim()}, {"killed_by_forgetful", killed}});
    }
    rep.add("forgetful_h0_faithfulness", Status::pass, "informational", json{{"samples", faith}});
    rep.add("cone_witnesses", Status::pass, "", json{{"cones", witnesses}});
    rep.seconds = sw.seconds();
    return out;
}

/// True when some sample module has a nonzero H^0 endomorphism class that
/// forgets to a null-homotopic map.
inline bool forgetful_unfaithful(const VerdictReport& rep) {
    const auto* c = rep.find("forgetful_h0_faithfulness");
    if (!c) return false;
    for (const auto& s : c->witness["samples"])
        if (s["killed_by_forgetful"].get<std::size_t>() > 0) return true;
    return false;
}

}  // namespace dgm
