//! The end-to-end certification pipeline and its JSON certificate.
//!
//! Failed checks are recorded, not raised: a certificate with a `fail` verdict is
//! still a complete certificate. Only parameter, budget and I/O problems abort.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::construct::{
    block_graph, block_intersection_sizes, expected_design_parameters, is_subspace_point_set, jt_design,
    pg_design, phi_map, psi_map, split_a_b, switching_partition, twisted_grassmann, verify_2_design,
    verify_lifted_quotient, verify_pre_switch_rule, verify_switched_rule, Design, DesignParameters, DesignVerdict,
    Geometry, Parameters,
};
use crate::error::Result;
use crate::graph::{
    char_poly, check_isomorphism, CharPoly, gm_switch, intersection_array, validate_gm, vertex_invariant_distribution,
    DistanceRegularity, GmTally, Graph, InvariantDistribution, InvariantKind, DEFAULT_SPECTRAL_BUDGET,
};
use crate::subspace::{Polarity, DEFAULT_ENUMERATION_BUDGET};

/// Above this many elementary steps (`n * degree^3`) the neighbourhood
/// characteristic polynomial invariant is replaced by clique counts.
pub const NBHD_CHARPOLY_WORK_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    /// Present exactly when `status` is `skipped`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl Verdict {
    pub fn check(ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Verdict { status, detail: Some(detail.into()), reason: None }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Verdict { status: Status::Skipped, detail: None, reason: Some(reason.into()) }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub spectral_budget: usize,
    pub enumeration_budget: u64,
    pub skip_charpoly: bool,
    pub invariant: InvariantKind,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            spectral_budget: DEFAULT_SPECTRAL_BUDGET,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            skip_charpoly: false,
            invariant: InvariantKind::NbhdCharpoly,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub vertices: usize,
    pub a: usize,
    pub b: usize,
    pub d: usize,
    pub cells: usize,
    /// Cells with `σ(U) = U`.
    pub fixed_cells: usize,
    /// Cell size to number of cells.
    pub cell_sizes: BTreeMap<usize, usize>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GmSection {
    pub verdict: Verdict,
    pub equitable: bool,
    pub tally: GmTally,
    pub lifted_quotient: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSection {
    pub verdict: Verdict,
    pub checked_pairs: u64,
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CospectralitySection {
    /// `"charpoly"` or `"intersection-array"`.
    pub method: String,
    pub verdict: Verdict,
    pub charpoly: Verdict,
    pub intersection_arrays: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionArrays {
    pub original: Option<String>,
    pub switched: Option<String>,
    pub twisted: Option<String>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignSection {
    pub verdict: Verdict,
    pub expected: DesignParameters,
    pub found: Option<DesignParameters>,
    /// `|B ∩ B'|` to number of unordered block pairs.
    pub intersection_sizes: BTreeMap<usize, u64>,
    pub intersection_sizes_verdict: Verdict,
    /// Blocks that are not the point set of a subspace.
    pub non_subspace_blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Designs {
    pub geometric: DesignSection,
    pub pseudo_geometric: DesignSection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isomorphisms {
    /// Block graph of the geometric design equals the Grassmann graph under `W ↦ [W]`.
    pub block_graph_identity: Verdict,
    /// `φ` from the switched graph to the block graph of the pseudo-geometric design.
    pub phi: Verdict,
    /// `ψ` from the twisted Grassmann graph to the same block graph.
    pub psi: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSummary {
    pub distinct: usize,
    pub class_sizes: Vec<usize>,
}

impl From<&InvariantDistribution> for InvariantSummary {
    fn from(d: &InvariantDistribution) -> Self {
        InvariantSummary { distinct: d.distinct(), class_sizes: d.class_sizes() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transitivity {
    pub invariant: InvariantKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fallback_reason: Option<String>,
    pub original: InvariantSummary,
    pub switched: InvariantSummary,
    pub twisted: InvariantSummary,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarityIndependence {
    pub verdict: Verdict,
    pub charpoly: Verdict,
    pub intersection_array: Verdict,
    pub invariant: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tool: ToolInfo,
    pub params: Parameters,
    pub counts: Counts,
    pub gm_validation: GmSection,
    pub pre_switch_rule: RuleSection,
    pub switched_rule: RuleSection,
    pub cospectrality: CospectralitySection,
    pub intersection_arrays: IntersectionArrays,
    pub designs: Designs,
    pub isomorphisms: Isomorphisms,
    pub transitivity: Transitivity,
    pub polarity_independence: PolarityIndependence,
    /// True iff no verdict is `fail`.
    pub passed: bool,
    /// Stage name to elapsed milliseconds. Not deterministic.
    pub wall_clock_ms: BTreeMap<String, u64>,
}

impl Certificate {
    pub fn verdicts(&self) -> Vec<(&'static str, &Verdict)> {
        vec![
            ("counts", &self.counts.verdict),
            ("gm_validation", &self.gm_validation.verdict),
            ("lifted_quotient", &self.gm_validation.lifted_quotient),
            ("pre_switch_rule", &self.pre_switch_rule.verdict),
            ("switched_rule", &self.switched_rule.verdict),
            ("cospectrality", &self.cospectrality.verdict),
            ("cospectrality.charpoly", &self.cospectrality.charpoly),
            ("cospectrality.intersection_arrays", &self.cospectrality.intersection_arrays),
            ("intersection_arrays", &self.intersection_arrays.verdict),
            ("designs.geometric", &self.designs.geometric.verdict),
            ("designs.geometric.intersection_sizes", &self.designs.geometric.intersection_sizes_verdict),
            ("designs.pseudo_geometric", &self.designs.pseudo_geometric.verdict),
            (
                "designs.pseudo_geometric.intersection_sizes",
                &self.designs.pseudo_geometric.intersection_sizes_verdict,
            ),
            ("isomorphisms.block_graph_identity", &self.isomorphisms.block_graph_identity),
            ("isomorphisms.phi", &self.isomorphisms.phi),
            ("isomorphisms.psi", &self.isomorphisms.psi),
            ("transitivity", &self.transitivity.verdict),
            ("polarity_independence", &self.polarity_independence.verdict),
            ("polarity_independence.charpoly", &self.polarity_independence.charpoly),
            ("polarity_independence.intersection_array", &self.polarity_independence.intersection_array),
            ("polarity_independence.invariant", &self.polarity_independence.invariant),
        ]
    }

    /// The JSON value with timings removed, for byte-level comparisons.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("wall_clock_ms");
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

struct Timer {
    start: Instant,
    stages: BTreeMap<String, u64>,
}

impl Timer {
    fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.stages.insert(name.to_string(), t.elapsed().as_millis() as u64);
        out
    }

    fn finish(mut self) -> BTreeMap<String, u64> {
        self.stages.insert("total".into(), self.start.elapsed().as_millis() as u64);
        self.stages
    }
}

/// Integer eigenvalues with multiplicities, e.g. `spectrum 42^1 11^30 -3^124`.
fn spectrum_string(p: &CharPoly, bound: usize) -> String {
    let (roots, rest) = p.integer_roots(bound as i64);
    let mut s = format!("degree {}, spectrum", p.degree());
    for (r, m) in roots {
        s.push_str(&format!(" {r}^{m}"));
    }
    if rest > 0 {
        s.push_str(&format!(" plus a factor of degree {rest} without integer roots"));
    }
    s
}

fn iso_detail(first: Option<(usize, usize)>) -> String {
    match first {
        None => "every vertex pair preserved".into(),
        Some((u, v)) => format!("adjacency of ({u}, {v}) not preserved"),
    }
}

fn array_string(r: &DistanceRegularity) -> Option<String> {
    r.array().map(ToString::to_string)
}

fn design_section(d: &Design, geom: &Geometry) -> Result<DesignSection> {
    let expected = expected_design_parameters(geom.params);
    let verdict = verify_2_design(d)?;
    let found = verdict.parameters();
    let v = match &verdict {
        DesignVerdict::Design(p) => Verdict::check(*p == expected, format!("2-({}, {}, {}) with {} blocks", p.v, p.k, p.lambda, p.b)),
        other => Verdict::check(false, format!("{other:?}")),
    };
    let allowed: Vec<usize> = (1..=geom.params.e).map(|i| geom.point_count(i)).collect();
    let sizes = block_intersection_sizes(d);
    let bad: Vec<usize> = sizes.keys().copied().filter(|s| !allowed.contains(s)).collect();
    let sizes_verdict = Verdict::check(bad.is_empty(), format!("allowed sizes {allowed:?}, unexpected {bad:?}"));
    let non_subspace_blocks = d.blocks().iter().filter(|b| !is_subspace_point_set(&geom.points, b)).count();
    Ok(DesignSection {
        verdict: v,
        expected,
        found,
        intersection_sizes: sizes,
        intersection_sizes_verdict: sizes_verdict,
        non_subspace_blocks,
    })
}

fn invariant_plan(n: usize, degree: usize, opts: &CertifyOptions) -> (InvariantKind, Option<String>) {
    let work = n as u64 * (degree as u64).pow(3);
    match opts.invariant {
        InvariantKind::NbhdCharpoly if work > NBHD_CHARPOLY_WORK_LIMIT => (
            InvariantKind::CliqueCounts,
            Some(format!("budget: {n} neighbourhoods of order {degree} exceed the work limit {NBHD_CHARPOLY_WORK_LIMIT}")),
        ),
        k => (k, None),
    }
}

/// Runs the whole pipeline at `(q, e)`.
pub fn certify(params: Parameters, opts: &CertifyOptions) -> Result<Certificate> {
    params.require_certifiable()?;
    let mut timer = Timer { start: Instant::now(), stages: BTreeMap::new() };
    let e = params.e;

    let geom = timer.stage("enumerate", || Geometry::new(params, opts.enumeration_budget))?;
    let sigma = Polarity::symplectic(&geom.field, e);
    let gamma = timer.stage("grassmann", || geom.grassmann())?;
    let n = gamma.n();
    let degree = gamma.regular_degree().unwrap_or_else(|| gamma.degrees().into_iter().max().unwrap_or(0));

    // Census
    let split = split_a_b(&geom)?;
    let part = switching_partition(&geom, &sigma)?;
    let mut cell_sizes = BTreeMap::new();
    for c in &part.partition.cells {
        *cell_sizes.entry(c.len()).or_insert(0) += 1;
    }
    let qe = geom.point_count(e + 1) - geom.point_count(e);
    let sizes_ok = cell_sizes.keys().all(|&s| s == qe || s == 2 * qe);
    let cover = part.partition.cells.iter().map(Vec::len).sum::<usize>() + part.partition.exempt.len();
    let counts = Counts {
        vertices: n,
        a: split.a.len(),
        b: split.b.len(),
        d: split.d.len(),
        cells: part.partition.cells.len(),
        fixed_cells: part.fixed_cells(),
        cell_sizes,
        verdict: Verdict::check(
            sizes_ok && cover == n && split.a.len() + split.d.len() == n,
            format!("cell sizes in {{{qe}, {}}}, cells + D cover {cover} of {n}", 2 * qe),
        ),
    };

    // Switching hypothesis and the switch itself
    let (gm, lifted_quotient) = timer.stage("validate", || -> Result<_> {
        let gm = validate_gm(&gamma, &part.partition)?;
        let pairs: Vec<Vec<usize>> =
            part.cell_pairs.iter().map(|&(u, s)| if u == s { vec![u] } else { vec![u, s] }).collect();
        let l1 = verify_lifted_quotient(&geom, &gamma, &pairs)?;
        Ok((gm, l1))
    })?;
    let gm_section = GmSection {
        verdict: Verdict::check(gm.passed && gm.tally.half > 0, gm.summary()),
        equitable: gm.equitability.is_equitable(),
        tally: gm.tally,
        lifted_quotient: Verdict::check(
            lifted_quotient.matches,
            match lifted_quotient.first_mismatch {
                Some((i, j, f, x)) => format!("entry ({i}, {j}) is {f}, expected {x}"),
                None => format!("{} lifted cells match q m_ij + δ_ij (q^e - 1)", lifted_quotient.small.size()),
            },
        ),
    };
    let switched: Option<Graph<_>> = if gm.passed { Some(gm_switch(&gamma, &part.partition)?) } else { None };

    let pre = verify_pre_switch_rule(&gamma, &geom)?;
    let pre_switch_rule = RuleSection {
        verdict: Verdict::check(pre.passed, format!("{} violations", pre.violations)),
        checked_pairs: pre.checked_pairs,
        violations: pre.violations,
    };
    let switched_rule = match &switched {
        Some(sw) => {
            let rule = timer.stage("switched_rule", || verify_switched_rule(sw, &geom, &part))?;
            RuleSection {
                verdict: Verdict::check(rule.passed, format!("{} violations", rule.violations)),
                checked_pairs: rule.checked_pairs,
                violations: rule.violations,
            }
        }
        None => RuleSection { verdict: Verdict::skipped("switching hypothesis failed"), checked_pairs: 0, violations: 0 },
    };

    let twisted = timer.stage("twisted", || twisted_grassmann(&geom))?;

    // Intersection arrays
    let ia_gamma = timer.stage("intersection_array.original", || intersection_array(&gamma))?;
    let ia_switched = match &switched {
        Some(sw) => Some(timer.stage("intersection_array.switched", || intersection_array(sw))?),
        None => None,
    };
    let ia_twisted = timer.stage("intersection_array.twisted", || intersection_array(&twisted))?;
    let arrays_equal = match (&ia_gamma, &ia_switched, &ia_twisted) {
        (DistanceRegularity::Regular(a), Some(DistanceRegularity::Regular(b)), DistanceRegularity::Regular(c)) => {
            a == b && a == c
        }
        _ => false,
    };
    let intersection_arrays = IntersectionArrays {
        original: array_string(&ia_gamma),
        switched: ia_switched.as_ref().and_then(array_string),
        twisted: array_string(&ia_twisted),
        verdict: Verdict::check(arrays_equal, "all three graphs distance-regular with one intersection array"),
    };

    // Cospectrality
    let charpoly = if opts.skip_charpoly {
        Verdict::skipped("skip-charpoly flag")
    } else if n > opts.spectral_budget {
        Verdict::skipped(format!("budget: {n} vertices exceed the spectral budget {}", opts.spectral_budget))
    } else if let Some(sw) = &switched {
        let (p, ps, pt) = timer.stage("charpoly", || -> Result<_> {
            Ok((
                char_poly(&gamma, opts.spectral_budget)?,
                char_poly(sw, opts.spectral_budget)?,
                char_poly(&twisted, opts.spectral_budget)?,
            ))
        })?;
        let same = p == ps && p == pt;
        let detail = if same { format!("all three equal; {}", spectrum_string(&p, degree)) } else { "characteristic polynomials differ".into() };
        Verdict::check(same, detail)
    } else {
        Verdict::skipped("switching hypothesis failed")
    };
    let ia_verdict = intersection_arrays.verdict.clone();
    let (method, verdict) = if charpoly.status == Status::Skipped {
        ("intersection-array", ia_verdict.clone())
    } else {
        ("charpoly", charpoly.clone())
    };
    let cospectrality =
        CospectralitySection { method: method.into(), verdict, charpoly: charpoly.clone(), intersection_arrays: ia_verdict };

    // Designs
    let pg = timer.stage("designs.geometric", || pg_design(&geom))?;
    let jt = timer.stage("designs.pseudo_geometric", || jt_design(&geom, &sigma))?;
    let designs = Designs { geometric: design_section(&pg, &geom)?, pseudo_geometric: design_section(&jt, &geom)? };

    // Isomorphisms
    let s = geom.point_count(e);
    let isomorphisms = timer.stage("isomorphisms", || -> Result<_> {
        let pg_graph = block_graph(&pg, s)?;
        let to_block: Vec<usize> = geom
            .blocks
            .iter()
            .map(|w| pg.index_of(&geom.points.indices(w)).expect("every [W] is a block"))
            .collect();
        let identity = check_isomorphism(&gamma, &pg_graph, &to_block)?;
        let delta = block_graph(&jt, s)?;
        let phi = match &switched {
            Some(sw) => {
                let r = check_isomorphism(sw, &delta, &phi_map(&geom, &sigma, &jt)?)?;
                Verdict::check(r.is_isomorphism, iso_detail(r.first_violation))
            }
            None => Verdict::skipped("switching hypothesis failed"),
        };
        let psi = check_isomorphism(&twisted, &delta, &psi_map(&geom, &sigma, &twisted, &jt)?)?;
        Ok(Isomorphisms {
            block_graph_identity: Verdict::check(identity.is_isomorphism, iso_detail(identity.first_violation)),
            phi,
            psi: Verdict::check(psi.is_isomorphism, iso_detail(psi.first_violation)),
        })
    })?;

    // Vertex invariants
    let (kind, fallback_reason) = invariant_plan(n, degree, opts);
    let inv = |g: &Graph<_>| vertex_invariant_distribution(g, kind, opts.spectral_budget);
    let (d_gamma, d_switched, d_twisted) = timer.stage("invariants", || -> Result<_> {
        Ok((inv(&gamma)?, switched.as_ref().map(inv).transpose()?, inv(&twisted)?))
    })?;
    let fell_back = d_gamma.fell_back || d_twisted.fell_back;
    let switched_summary = d_switched.as_ref().map(InvariantSummary::from).unwrap_or(InvariantSummary { distinct: 0, class_sizes: vec![] });
    let transitivity = Transitivity {
        invariant: d_gamma.invariant,
        fallback_reason: fallback_reason.or_else(|| fell_back.then(|| "budget: neighbourhood exceeds the spectral budget".into())),
        original: (&d_gamma).into(),
        verdict: Verdict::check(
            d_gamma.distinct() == 1 && switched_summary.distinct >= 2 && d_twisted.distinct() >= 2,
            format!(
                "distinct values: original {}, switched {}, twisted {}",
                d_gamma.distinct(),
                switched_summary.distinct,
                d_twisted.distinct()
            ),
        ),
        switched: switched_summary,
        twisted: (&d_twisted).into(),
    };

    // A second polarity
    let polarity_independence = timer.stage("polarity_independence", || -> Result<_> {
        let Some(sw) = &switched else {
            let s = Verdict::skipped("switching hypothesis failed");
            return Ok(PolarityIndependence { verdict: s.clone(), charpoly: s.clone(), intersection_array: s.clone(), invariant: s });
        };
        let tau = Polarity::interleaved(&geom.field, e);
        let part2 = switching_partition(&geom, &tau)?;
        let report = validate_gm(&gamma, &part2.partition)?;
        if !report.passed {
            let s = Verdict::check(false, format!("second polarity: {}", report.summary()));
            return Ok(PolarityIndependence { verdict: s.clone(), charpoly: s.clone(), intersection_array: s.clone(), invariant: s });
        }
        let sw2 = gm_switch(&gamma, &part2.partition)?;
        let cp = if charpoly.status == Status::Skipped {
            Verdict::skipped(charpoly.reason.clone().unwrap_or_default())
        } else {
            let a = char_poly(sw, opts.spectral_budget)?;
            let b = char_poly(&sw2, opts.spectral_budget)?;
            Verdict::check(a == b, "characteristic polynomials of both switched graphs")
        };
        let ia2 = intersection_array(&sw2)?;
        let ia = Verdict::check(Some(&ia2) == ia_switched.as_ref(), format!("second polarity gives {}", array_string(&ia2).unwrap_or_else(|| "no array".into())));
        let d2 = inv(&sw2)?;
        let same_inv = d_switched.as_ref().is_some_and(|d| d.classes == d2.classes);
        let iv = Verdict::check(same_inv, format!("{} distinct values", d2.distinct()));
        let all = !cp.failed() && ia.passed() && iv.passed();
        Ok(PolarityIndependence {
            verdict: Verdict::check(all, "switched graphs from two alternating Gram matrices agree on every computed invariant"),
            charpoly: cp,
            intersection_array: ia,
            invariant: iv,
        })
    })?;

    let mut cert = Certificate {
        tool: ToolInfo { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() },
        params,
        counts,
        gm_validation: gm_section,
        pre_switch_rule,
        switched_rule,
        cospectrality,
        intersection_arrays,
        designs,
        isomorphisms,
        transitivity,
        polarity_independence,
        passed: false,
        wall_clock_ms: BTreeMap::new(),
    };
    cert.passed = cert.verdicts().iter().all(|(_, v)| !v.failed());
    cert.wall_clock_ms = timer.finish();
    Ok(cert)
}
