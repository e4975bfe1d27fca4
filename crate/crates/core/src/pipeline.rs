//! The verification pipeline: build both one-vertex families, pass to the
//! cyclic double cover, crush every vertex-joining edge, and check the
//! tetrahedron-count arithmetic, homology, signature agreement and surface
//! topology, producing a machine-readable certificate per k.

use crate::algebra::AbelianGroupSpec;
use crate::census::{enumerate_closed, search_by_h1, CensusConstraints};
use crate::constructions::{
    layered_lens_2k1, layered_lens_4k, twisted_layered_loop_with_labels,
};
use crate::covers::{
    audit_lifted_lemma, build_double_cover, nonzero_classes, verify_cover, vertex_joining_edges,
    Cover,
};
use crate::error::{Error, Result};
use crate::homology::h1_integral;
use crate::isosig::{signature, Signature};
use crate::moves::crush_vertex_joining_edge;
use crate::skeleton::{skeleton, validate};
use crate::surfaces::{build_quad_surface, chain_vertical_selection, lift_selection};
use crate::tri::Triangulation;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct BaseInfo {
    #[serde(rename = "tetCount")]
    pub tet_count: usize,
    pub h1: AbelianGroupSpec,
    pub signature: Signature,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverInfo {
    /// Index into the deterministic list of nonzero classes, 1-based.
    #[serde(rename = "classId")]
    pub class_id: usize,
    #[serde(rename = "coverH1")]
    pub cover_h1: AbelianGroupSpec,
    #[serde(rename = "vertexCount")]
    pub vertex_count: usize,
    #[serde(rename = "tetCount")]
    pub tet_count: usize,
    pub verified: bool,
    /// Present for k ≥ 4 only.
    #[serde(rename = "auditPassed", skip_serializing_if = "Option::is_none")]
    pub audit_passed: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrushInfo {
    pub edge: usize,
    /// t(ẽ): tetrahedra incident with the crushed edge.
    #[serde(rename = "tetrahedraIncident")]
    pub tetrahedra_incident: usize,
    #[serde(rename = "resultTetCount")]
    pub result_tet_count: usize,
    #[serde(rename = "resultSignature")]
    pub result_signature: Signature,
    #[serde(rename = "resultH1")]
    pub result_h1: AbelianGroupSpec,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySide {
    pub base: BaseInfo,
    pub cover: CoverInfo,
    /// One record per vertex-joining edge of the cover.
    pub crushes: Vec<CrushInfo>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceDigest {
    pub components: usize,
    #[serde(rename = "eulerCharacteristic")]
    pub euler: i64,
    pub orientable: bool,
    #[serde(rename = "twoSided")]
    pub two_sided: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityWitness {
    /// t(ẽ), constant across all crushed edges.
    #[serde(rename = "tetrahedraIncident")]
    pub tetrahedra_incident: usize,
    /// 2k − t(ẽ).
    #[serde(rename = "twoKMinusT")]
    pub two_k_minus_t: usize,
    #[serde(rename = "crushTetCount")]
    pub crush_tet_count: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusCrossCheck {
    pub n: usize,
    #[serde(rename = "loopUnique")]
    pub loop_unique: Option<bool>,
    #[serde(rename = "lensUnique")]
    pub lens_unique: Option<bool>,
    #[serde(rename = "containsLoop")]
    pub contains_loop: bool,
    #[serde(rename = "containsLens")]
    pub contains_lens: bool,
    #[serde(rename = "containsCrushResult")]
    pub contains_crush_result: bool,
}

/// Complexity bounds witnessed by the certificate; exact when the census
/// range covers them.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexityWitness {
    pub manifold: String,
    #[serde(rename = "witnessedUpperBound")]
    pub witnessed_upper_bound: usize,
    #[serde(rename = "censusExact")]
    pub census_exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyCertificate {
    #[serde(rename = "schemaVersion")]
    pub schema_version: u32,
    pub k: usize,
    pub pass: bool,
    #[serde(rename = "firstFailure", skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub failures: Vec<String>,
    #[serde(rename = "loop")]
    pub loop_side: FamilySide,
    #[serde(rename = "lens4k")]
    pub lens_side: FamilySide,
    #[serde(rename = "crossFamilyAgreement")]
    pub cross_family_agreement: bool,
    #[serde(rename = "kleinBottleCheck")]
    pub klein_bottle_check: SurfaceDigest,
    #[serde(rename = "torusLiftCheck")]
    pub torus_lift_check: SurfaceDigest,
    #[serde(rename = "inequalityWitness")]
    pub inequality_witness: InequalityWitness,
    #[serde(rename = "censusCrossCheck", skip_serializing_if = "Option::is_none")]
    pub census_cross_check: Option<CensusCrossCheck>,
    pub complexity: Vec<ComplexityWitness>,
}

impl FamilyCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

struct Checker {
    failures: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker { failures: Vec::new() }
    }
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Choose the nonzero class whose connected cover has cyclic H₁ of the
/// given order; returns (1-based class id, cover).
fn cyclic_cover(t: &Triangulation, order: u64) -> Result<(usize, Cover)> {
    let classes = nonzero_classes(t)?;
    for (i, c) in classes.iter().enumerate() {
        let cover = build_double_cover(t, c)?;
        if cover.is_connected()
            && h1_integral(&cover.total)? == AbelianGroupSpec::cyclic(order)
        {
            return Ok((i + 1, cover));
        }
    }
    Err(Error::Precondition(format!(
        "no class with connected cover of cyclic H1 order {order}"
    )))
}

fn family_side(
    name: &str,
    t: &Triangulation,
    k: usize,
    expect_unique_class: bool,
    checker: &mut Checker,
) -> Result<FamilySide> {
    let base_h1 = h1_integral(t)?;
    let base = BaseInfo {
        tet_count: t.tet_count(),
        h1: base_h1,
        signature: signature(t),
    };
    checker.check(t.tet_count() == k, || {
        format!("{name}: base has {} tetrahedra, expected {k}", t.tet_count())
    });
    let report = validate(t);
    checker.check(report.pass(), || format!("{name}: base fails validation"));
    let skel = skeleton(t);
    checker.check(skel.vertex_count() == 1, || {
        format!("{name}: base has {} vertices", skel.vertex_count())
    });

    if expect_unique_class {
        let count = nonzero_classes(t)?.len();
        checker.check(count == 1, || {
            format!("{name}: expected a unique nonzero class, found {count}")
        });
    }

    let (class_id, cover) = cyclic_cover(t, 2 * k as u64)?;
    let cover_skel = skeleton(&cover.total);
    let verified = verify_cover(&cover);
    checker.check(verified, || format!("{name}: cover fails verification"));
    checker.check(cover.total.tet_count() == 2 * k, || {
        format!("{name}: cover has {} tetrahedra", cover.total.tet_count())
    });
    checker.check(cover_skel.vertex_count() == 2, || {
        format!("{name}: cover has {} vertices", cover_skel.vertex_count())
    });

    let audit_passed = if k >= 4 {
        let audit = audit_lifted_lemma(&cover)?;
        checker.check(audit.pass(), || {
            format!("{name}: lifted-edge audit found {:?}", audit.violations)
        });
        Some(audit.pass())
    } else {
        None
    };

    let cover_info = CoverInfo {
        class_id,
        cover_h1: h1_integral(&cover.total)?,
        vertex_count: cover_skel.vertex_count(),
        tet_count: cover.total.tet_count(),
        verified,
        audit_passed,
    };

    let mut crushes = Vec::new();
    for e in vertex_joining_edges(&cover)? {
        let incident = cover_skel.edges[e].tet_count;
        checker.check(incident == 3, || {
            format!("{name}: cover edge {e} lies in {incident} tetrahedra, expected 3")
        });
        match crush_vertex_joining_edge(&cover.total, e) {
            Err(err) => {
                checker.check(false, || format!("{name}: edge {e} not crushable: {err}"));
            }
            Ok(report) => {
                let res = &report.result;
                let res_skel = skeleton(res);
                let res_report = validate(res);
                checker.check(res_report.pass(), || {
                    format!("{name}: crush of edge {e} is not a valid closed triangulation")
                });
                checker.check(res_skel.vertex_count() == 1, || {
                    format!("{name}: crush of edge {e} has {} vertices", res_skel.vertex_count())
                });
                checker.check(res.tet_count() == 2 * k - 3, || {
                    format!(
                        "{name}: crush of edge {e} has {} tetrahedra, expected {}",
                        res.tet_count(),
                        2 * k - 3
                    )
                });
                let h1 = h1_integral(res)?;
                checker.check(h1 == AbelianGroupSpec::cyclic(2 * k as u64), || {
                    format!("{name}: crush of edge {e} has H1 = {h1}")
                });
                crushes.push(CrushInfo {
                    edge: e,
                    tetrahedra_incident: incident,
                    result_tet_count: res.tet_count(),
                    result_signature: signature(res),
                    result_h1: h1,
                });
            }
        }
    }
    checker.check(!crushes.is_empty(), || {
        format!("{name}: no vertex-joining edges found")
    });

    Ok(FamilySide {
        base,
        cover: cover_info,
        crushes,
    })
}

/// Verify the two families at one k, producing the certificate.
pub fn verify_family(k: usize) -> Result<FamilyCertificate> {
    if k < 2 {
        return Err(Error::Precondition("verification needs k >= 2".into()));
    }
    if k > 12 {
        return Err(Error::Precondition("k > 12 exceeds the runtime cap".into()));
    }
    let mut checker = Checker::new();

    let (loop_tri, labels) = twisted_layered_loop_with_labels(k)?;
    let lens_tri = layered_lens_4k(k)?;
    let reference = layered_lens_2k1(k)?;
    let reference_sig = signature(&reference);
    checker.check(reference.tet_count() == 2 * k - 3, || {
        format!("reference L(2k,1) has {} tetrahedra", reference.tet_count())
    });

    let loop_h1 = h1_integral(&loop_tri)?;
    let expected_loop_h1 = if k % 2 == 1 {
        AbelianGroupSpec::cyclic(4)
    } else {
        AbelianGroupSpec::new(vec![2, 2], 0)
    };
    checker.check(loop_h1 == expected_loop_h1, || {
        format!("loop: H1 = {loop_h1}, expected {expected_loop_h1}")
    });
    let lens_h1 = h1_integral(&lens_tri)?;
    checker.check(lens_h1 == AbelianGroupSpec::cyclic(4 * k as u64), || {
        format!("lens4k: H1 = {lens_h1}")
    });

    let loop_side = family_side("loop", &loop_tri, k, false, &mut checker)?;
    let lens_side = family_side("lens4k", &lens_tri, k, true, &mut checker)?;

    // all crush signatures agree, across edges and across families, and
    // equal the reference lens triangulation
    let cross_family_agreement = !loop_side.crushes.is_empty()
        && !lens_side.crushes.is_empty()
        && loop_side
            .crushes
            .iter()
            .chain(&lens_side.crushes)
            .all(|c| c.result_signature == reference_sig);
    checker.check(cross_family_agreement, || {
        "crush results disagree with the reference lens triangulation".into()
    });

    // one-sided Klein bottle in the loop, torus in its cover
    let sel = chain_vertical_selection(&loop_tri, &labels)?;
    let klein = build_quad_surface(&loop_tri, &sel)?;
    let klein_ok = klein.components.len() == 1
        && klein.components[0].euler == 0
        && !klein.components[0].orientable
        && !klein.components[0].two_sided;
    checker.check(klein_ok, || format!("vertical surface is not a one-sided Klein bottle: {klein:?}"));
    let klein_digest = SurfaceDigest {
        components: klein.components.len(),
        euler: klein.components[0].euler,
        orientable: klein.components[0].orientable,
        two_sided: klein.components[0].two_sided,
    };

    let (_, loop_cover) = cyclic_cover(&loop_tri, 2 * k as u64)?;
    let lifted = lift_selection(&loop_cover, &sel)?;
    let torus = build_quad_surface(&loop_cover.total, &lifted)?;
    let torus_ok = torus.components.len() == 1
        && torus.components[0].euler == 0
        && torus.components[0].orientable
        && torus.components[0].two_sided;
    checker.check(torus_ok, || format!("lifted surface is not a torus: {torus:?}"));
    let torus_digest = SurfaceDigest {
        components: torus.components.len(),
        euler: torus.components[0].euler,
        orientable: torus.components[0].orientable,
        two_sided: torus.components[0].two_sided,
    };

    let t_incident = loop_side
        .crushes
        .first()
        .map(|c| c.tetrahedra_incident)
        .unwrap_or(0);
    let crush_tets = loop_side
        .crushes
        .first()
        .map(|c| c.result_tet_count)
        .unwrap_or(0);
    let inequality_witness = InequalityWitness {
        tetrahedra_incident: t_incident,
        two_k_minus_t: 2 * k - t_incident,
        crush_tet_count: crush_tets,
        holds: 2 * k - t_incident == crush_tets && 2 * k - t_incident == 2 * k - 3,
    };
    checker.check(inequality_witness.holds, || {
        "tetrahedron-count arithmetic 2k - t = 2k - 3 fails".into()
    });

    // census cross-checks at desk scale
    let census_cross_check = if k <= 3 {
        let entries = enumerate_closed(k, CensusConstraints::orientable_closed())?;
        let loop_sig = &loop_side.base.signature;
        let lens_sig = &lens_side.base.signature;
        let contains_loop = entries.iter().any(|e| e.signature == *loop_sig);
        let contains_lens = entries.iter().any(|e| e.signature == *lens_sig);
        // the crush result has 2k-3 tetrahedra; it lies in this census
        // exactly when 2k-3 = k, i.e. k = 3
        let contains_crush_result = if 2 * k - 3 == k {
            entries.iter().any(|e| e.signature == reference_sig)
        } else {
            true
        };
        let (loop_unique, lens_unique) = if k == 2 {
            let lu = search_by_h1(&entries, &expected_loop_h1).len() == 1;
            let le = search_by_h1(&entries, &AbelianGroupSpec::cyclic(4 * k as u64)).len() == 1;
            (Some(lu), Some(le))
        } else {
            (None, None)
        };
        let check = CensusCrossCheck {
            n: k,
            loop_unique,
            lens_unique,
            contains_loop,
            contains_lens,
            contains_crush_result,
        };
        checker.check(contains_loop && contains_lens && contains_crush_result, || {
            "census does not contain the constructed triangulations".into()
        });
        checker.check(
            loop_unique.unwrap_or(true) && lens_unique.unwrap_or(true),
            || "census uniqueness by H1 fails".into(),
        );
        Some(check)
    } else {
        None
    };

    let census_exact = k <= 3;
    let complexity = vec![
        ComplexityWitness {
            manifold: format!("S3/Q{}", 4 * k),
            witnessed_upper_bound: k,
            census_exact,
        },
        ComplexityWitness {
            manifold: format!("L({},{})", 4 * k, 2 * k - 1),
            witnessed_upper_bound: k,
            census_exact,
        },
        ComplexityWitness {
            manifold: format!("L({},1)", 2 * k),
            witnessed_upper_bound: 2 * k - 3,
            census_exact: 2 * k - 3 <= 3,
        },
    ];

    let failures = checker.failures;
    Ok(FamilyCertificate {
        schema_version: SCHEMA_VERSION,
        k,
        pass: failures.is_empty(),
        first_failure: failures.first().cloned(),
        failures,
        loop_side,
        lens_side,
        cross_family_agreement,
        klein_bottle_check: klein_digest,
        torus_lift_check: torus_digest,
        inequality_witness,
        census_cross_check,
        complexity,
    })
}
