//! Seeded property suites and machine-readable reports.
//!
//! Each property owns a generator (ring + stream → JSON instance) and a
//! checker (ring + JSON instance → pass/fail), so any dumped
//! counterexample can be re-loaded and replayed bit-for-bit.  Instance
//! streams are derived per (suite, property, ring, index), which makes
//! the reports independent of thread count and execution order.

use crate::biduals::{self, BidualElement, BidualSetting, KernelBidual};
use crate::complexes::{self, QuadraticComplex};
use crate::fitting;
use crate::gen::{self, RingDescriptor};
use crate::kolyvagin;
use crate::limits;
use crate::linalg::{self, BaseMatrix};
use crate::modules::{self, PresentedModule};
use crate::ring::{GorensteinRing, Ideal, RingElement};
use crate::rmatrix::{self, RMatrix};
use crate::rng::SplitMix64;
use crate::stark;
use crate::wedge;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::time::Instant;

pub const SUITES: [&str; 9] =
    ["ring", "linalg", "modules", "fitting", "biduals", "complexes", "stark", "kolyvagin", "limits"];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    pub rings: Vec<RingDescriptor>,
    pub bound: u64,
}

impl SuiteConfig {
    pub fn default_grid() -> Vec<RingDescriptor> {
        vec![
            RingDescriptor { p: 2, m: 2, group: vec![] },
            RingDescriptor { p: 2, m: 3, group: vec![] },
            RingDescriptor { p: 3, m: 1, group: vec![3] },
            RingDescriptor { p: 2, m: 2, group: vec![2] },
            RingDescriptor { p: 3, m: 2, group: vec![3] },
        ]
    }
}

type GenFn = fn(&GorensteinRing, &mut SplitMix64, &SuiteConfig) -> Value;
type CheckFn = fn(&GorensteinRing, &Value, &SuiteConfig) -> Result<(), String>;

pub struct Property {
    pub name: &'static str,
    pub statement: &'static str,
    pub gen: GenFn,
    pub check: CheckFn,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub statement: String,
    pub instances: u64,
    pub failures: u64,
    pub first_counterexample: Option<Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Timing {
    pub timestamp_ms: u128,
    pub wall_ms: BTreeMap<String, u128>,
    pub total_ms: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    pub rings: Vec<RingDescriptor>,
    pub bound: u64,
    pub properties: Vec<PropertyReport>,
    pub timing: Timing,
}

impl Report {
    pub fn failures(&self) -> u64 {
        self.properties.iter().map(|p| p.failures).sum()
    }

    /// The deterministic part: everything except timing.
    pub fn normalized(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().unwrap().remove("timing");
        v
    }
}

fn fnv1a(parts: &[&str]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for b in part.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
        h ^= 0xff;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h
}

pub fn properties_for(suite: &str) -> Vec<Property> {
    match suite {
        "ring" => ring_properties(),
        "linalg" => linalg_properties(),
        "modules" => modules_properties(),
        "fitting" => fitting_properties(),
        "biduals" => biduals_properties(),
        "complexes" => complexes_properties(),
        "stark" => stark_properties(),
        "kolyvagin" => kolyvagin_properties(),
        "limits" => limits_properties(),
        _ => Vec::new(),
    }
}

/// Run one property on one already-generated instance (counterexample
/// replay goes through this same entry point).
pub fn run_property(
    suite: &str,
    name: &str,
    ring: &GorensteinRing,
    instance: &Value,
    cfg: &SuiteConfig,
) -> Result<(), String> {
    let props = properties_for(suite);
    let prop = props
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| format!("unknown property {}/{}", suite, name))?;
    (prop.check)(ring, instance, cfg)
}

pub fn run_suite(cfg: &SuiteConfig) -> Report {
    let start = Instant::now();
    let suites: Vec<&str> = if cfg.suite == "all" {
        SUITES.to_vec()
    } else {
        vec![cfg.suite.as_str()]
    };
    let rings: Vec<(RingDescriptor, GorensteinRing)> = cfg
        .rings
        .iter()
        .map(|d| (d.clone(), d.build().expect("grid ring must construct")))
        .collect();
    let mut properties = Vec::new();
    let mut wall = BTreeMap::new();
    for suite in suites {
        for prop in properties_for(suite) {
            let pstart = Instant::now();
            let qualified = format!("{}/{}", suite, prop.name);
            let jobs: Vec<(usize, usize)> = (0..rings.len())
                .flat_map(|ri| (0..cfg.count).map(move |i| (ri, i)))
                .collect();
            let results: Vec<Option<Value>> = jobs
                .par_iter()
                .map(|&(ri, idx)| {
                    let (desc, ring) = &rings[ri];
                    let salt = fnv1a(&[suite, prop.name, &desc.label()]);
                    let mut rng = SplitMix64::derive(cfg.seed, salt, idx as u64);
                    let instance = (prop.gen)(ring, &mut rng, cfg);
                    match (prop.check)(ring, &instance, cfg) {
                        Ok(()) => None,
                        Err(msg) => Some(json!({
                            "suite": suite,
                            "property": prop.name,
                            "ring": desc,
                            "index": idx,
                            "instance": instance,
                            "error": msg,
                        })),
                    }
                })
                .collect();
            let failures = results.iter().filter(|r| r.is_some()).count() as u64;
            let first = results.into_iter().flatten().next();
            properties.push(PropertyReport {
                name: qualified.clone(),
                statement: prop.statement.to_string(),
                instances: (rings.len() * cfg.count) as u64,
                failures,
                first_counterexample: first,
            });
            wall.insert(qualified, pstart.elapsed().as_millis());
        }
    }
    properties.sort_by(|a, b| a.name.cmp(&b.name));
    let timestamp_ms = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    Report {
        schema: 1,
        suite: cfg.suite.clone(),
        seed: cfg.seed,
        count: cfg.count,
        rings: cfg.rings.clone(),
        bound: cfg.bound,
        properties,
        timing: Timing { timestamp_ms, wall_ms: wall, total_ms: start.elapsed().as_millis() },
    }
}

fn fail(msg: impl Into<String>) -> Result<(), String> {
    Err(msg.into())
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        fail(msg)
    }
}

// ---------------------------------------------------------------- ring

fn ring_properties() -> Vec<Property> {
    vec![
        Property {
            name: "unit_or_maximal",
            statement: "every element is a unit (with verified inverse) or lies in the maximal ideal",
            gen: |ring, rng, _| json!({ "x": gen::rand_element(ring, rng).coeffs }),
            check: |ring, v, _| {
                let x = RingElement { coeffs: serde_json::from_value(v["x"].clone()).unwrap() };
                let max_ideal = Ideal::new(ring.clone(), ring.max_ideal_gens().to_vec());
                if ring.is_unit(&x) {
                    let inv = ring.inverse(&x).ok_or("unit without inverse")?;
                    ensure(ring.mul(&x, &inv) == ring.one(), "inverse does not verify")?;
                    ensure(!max_ideal.contains(&x), "unit inside the maximal ideal")
                } else {
                    ensure(max_ideal.contains(&x), "non-unit outside the maximal ideal")
                }
            },
        },
        Property {
            name: "socle_one_dimensional",
            statement: "the socle R[m] is a one-dimensional F_p-space and equals Ann(m)",
            gen: |_, _, _| json!({}),
            check: |ring, _, _| {
                let socle = ring.socle();
                ensure(socle.size_exp() == 1, "socle dimension differs from one")?;
                let ann = Ideal::new(ring.clone(), ring.max_ideal_gens().to_vec()).annihilator();
                ensure(socle == ann, "socle differs from the annihilator of the maximal ideal")
            },
        },
        Property {
            name: "double_annihilator",
            statement: "Ann(Ann(I)) = I for every ideal",
            gen: |ring, rng, _| {
                let k = 1 + rng.below(2);
                let gens: Vec<Vec<u64>> =
                    (0..k).map(|_| gen::rand_element(ring, rng).coeffs).collect();
                json!({ "gens": gens })
            },
            check: |ring, v, _| {
                let gens: Vec<Vec<u64>> = serde_json::from_value(v["gens"].clone()).unwrap();
                let ideal = Ideal::new(
                    ring.clone(),
                    gens.into_iter().map(|coeffs| RingElement { coeffs }).collect(),
                );
                ensure(ideal.double_annihilator() == ideal, "double annihilator differs")
            },
        },
        Property {
            name: "regular_rep_homomorphism",
            statement: "the regular representation preserves products and sums",
            gen: |ring, rng, _| {
                json!({
                    "x": gen::rand_element(ring, rng).coeffs,
                    "y": gen::rand_element(ring, rng).coeffs,
                })
            },
            check: |ring, v, _| {
                let x = RingElement { coeffs: serde_json::from_value(v["x"].clone()).unwrap() };
                let y = RingElement { coeffs: serde_json::from_value(v["y"].clone()).unwrap() };
                let prod = ring.regular_rep(&ring.mul(&x, &y));
                ensure(
                    prod == ring.regular_rep(&x).mul(&ring.regular_rep(&y)),
                    "rep(xy) differs from rep(x)rep(y)",
                )?;
                let lhs = ring.regular_rep(&ring.add(&x, &y));
                let xe = ring.regular_rep(&x);
                let ye = ring.regular_rep(&y);
                let mut sum = xe.clone();
                for (a, b) in sum.entries.iter_mut().zip(ye.entries.iter()) {
                    *a = (*a + *b) % ring.modulus();
                }
                ensure(lhs == sum, "rep(x+y) differs from rep(x)+rep(y)")
            },
        },
        Property {
            name: "ideal_lattice_chain",
            statement: "I·J ⊆ I ∩ J ⊆ I ⊆ I + J for random ideals",
            gen: |ring, rng, _| {
                let mk = |rng: &mut SplitMix64| -> Vec<Vec<u64>> {
                    (0..1 + rng.below(2)).map(|_| gen::rand_element(ring, rng).coeffs).collect()
                };
                json!({ "i": mk(rng), "j": mk(rng) })
            },
            check: |ring, v, _| {
                let parse = |key: &str, v: &Value| -> Ideal {
                    let gens: Vec<Vec<u64>> = serde_json::from_value(v[key].clone()).unwrap();
                    Ideal::new(
                        ring.clone(),
                        gens.into_iter().map(|coeffs| RingElement { coeffs }).collect(),
                    )
                };
                let i = parse("i", v);
                let j = parse("j", v);
                let prod = i.product(&j).unwrap();
                let int = i.intersection(&j).unwrap();
                let sum = i.sum(&j).unwrap();
                ensure(int.contains_ideal(&prod), "product escapes the intersection")?;
                ensure(i.contains_ideal(&int), "intersection escapes the factor")?;
                ensure(sum.contains_ideal(&i), "factor escapes the sum")
            },
        },
        Property {
            name: "quotient_preserves_units",
            statement: "projection to each quotient ring sends units to units",
            gen: |ring, rng, _| json!({ "x": gen::rand_unit(ring, rng).coeffs }),
            check: |ring, v, _| {
                let x = RingElement { coeffs: serde_json::from_value(v["x"].clone()).unwrap() };
                for i in 1..=ring.m() {
                    let q = ring.quotient_ring(i).map_err(|e| e.to_string())?;
                    ensure(q.is_unit(&ring.project(&q, &x)), "unit dies in a quotient")?;
                }
                Ok(())
            },
        },
        Property {
            name: "group_ring_axioms",
            statement: "distributivity, associativity, and commutativity of the convolution product",
            gen: |ring, rng, _| {
                json!({
                    "x": gen::rand_element(ring, rng).coeffs,
                    "y": gen::rand_element(ring, rng).coeffs,
                    "z": gen::rand_element(ring, rng).coeffs,
                })
            },
            check: |ring, v, _| {
                let e = |k: &str| RingElement {
                    coeffs: serde_json::from_value(v[k].clone()).unwrap(),
                };
                let (x, y, z) = (e("x"), e("y"), e("z"));
                ensure(
                    ring.mul(&ring.add(&x, &y), &z)
                        == ring.add(&ring.mul(&x, &z), &ring.mul(&y, &z)),
                    "distributivity fails",
                )?;
                ensure(
                    ring.mul(&ring.mul(&x, &y), &z) == ring.mul(&x, &ring.mul(&y, &z)),
                    "associativity fails",
                )?;
                ensure(ring.mul(&x, &y) == ring.mul(&y, &x), "commutativity fails")
            },
        },
    ]
}

// -------------------------------------------------------------- linalg

fn rand_base_matrix(ring: &GorensteinRing, rng: &mut SplitMix64, max: usize) -> BaseMatrix {
    let rows = 1 + rng.below(max as u64) as usize;
    let cols = 1 + rng.below(max as u64) as usize;
    BaseMatrix::from_rows(
        (0..rows).map(|_| (0..cols).map(|_| rng.below(ring.modulus())).collect()).collect(),
        cols,
        ring.modulus(),
    )
}

fn linalg_properties() -> Vec<Property> {
    vec![
        Property {
            name: "howell_idempotent_and_canonical",
            statement: "the Howell form is idempotent and identical for row-equivalent matrices",
            gen: |ring, rng, _| {
                let a = rand_base_matrix(ring, rng, 3);
                // row-equivalent variant: original rows plus random combinations
                let mut rows = a.row_vecs();
                for _ in 0..2 {
                    let coeffs: Vec<u64> = (0..a.rows).map(|_| rng.below(ring.modulus())).collect();
                    rows.push(linalg::row_mul_vec(&coeffs, &a));
                }
                json!({ "a": a, "b": BaseMatrix::from_rows(rows, a.cols, a.modulus) })
            },
            check: |_, v, _| {
                let a: BaseMatrix = serde_json::from_value(v["a"].clone()).unwrap();
                let b: BaseMatrix = serde_json::from_value(v["b"].clone()).unwrap();
                let ha = linalg::howell(&a);
                ensure(linalg::howell(&ha) == ha, "Howell form is not idempotent")?;
                ensure(linalg::howell(&b) == ha, "row-equivalent matrices disagree")
            },
        },
        Property {
            name: "howell_span_oracle",
            statement: "for small spans the Howell span agrees with exhaustive enumeration",
            gen: |ring, rng, _| {
                let rows = 1 + rng.below(2) as usize;
                let cols = 1 + rng.below(2) as usize;
                json!({ "a": BaseMatrix::from_rows(
                    (0..rows).map(|_| (0..cols).map(|_| rng.below(ring.modulus())).collect()).collect(),
                    cols,
                    ring.modulus(),
                )})
            },
            check: |ring, v, _| {
                let a: BaseMatrix = serde_json::from_value(v["a"].clone()).unwrap();
                let total = (a.modulus as u128).pow(a.rows as u32);
                if total > 4096 {
                    return Ok(());
                }
                let h = linalg::howell(&a);
                let mut seen = std::collections::BTreeSet::new();
                let mut coeffs = vec![0u64; a.rows];
                loop {
                    seen.insert(linalg::row_mul_vec(&coeffs, &a));
                    let mut i = 0;
                    loop {
                        if i == a.rows {
                            let exp = linalg::span_size_exp(&h);
                            let expect = (ring.p() as u128).pow(exp as u32);
                            ensure(seen.len() as u128 == expect, "span size disagrees")?;
                            for x in &seen {
                                ensure(linalg::span_contains(&h, x), "span member not reduced to zero")?;
                            }
                            return Ok(());
                        }
                        coeffs[i] += 1;
                        if coeffs[i] < a.modulus {
                            break;
                        }
                        coeffs[i] = 0;
                        i += 1;
                    }
                }
            },
        },
        Property {
            name: "kernel_generators_and_completeness",
            statement: "kernel rows satisfy x·A = 0 and capture every small kernel vector",
            gen: |ring, rng, _| json!({ "a": rand_base_matrix(ring, rng, 3) }),
            check: |_, v, _| {
                let a: BaseMatrix = serde_json::from_value(v["a"].clone()).unwrap();
                let ker = linalg::left_kernel(&a);
                for r in 0..ker.rows {
                    ensure(
                        linalg::row_mul_vec(ker.row(r), &a).iter().all(|&x| x == 0),
                        "kernel row fails the equation",
                    )?;
                }
                let total = (a.modulus as u128).pow(a.rows as u32);
                if total <= 4096 {
                    let h = linalg::howell(&ker);
                    let mut x = vec![0u64; a.rows];
                    loop {
                        if linalg::row_mul_vec(&x, &a).iter().all(|&v| v == 0) {
                            ensure(linalg::span_contains(&h, &x), "kernel vector missed")?;
                        }
                        let mut i = 0;
                        loop {
                            if i == a.rows {
                                return Ok(());
                            }
                            x[i] += 1;
                            if x[i] < a.modulus {
                                break;
                            }
                            x[i] = 0;
                            i += 1;
                        }
                    }
                }
                Ok(())
            },
        },
        Property {
            name: "double_kernel_closure",
            statement: "the double kernel closure contains the row span",
            gen: |ring, rng, _| json!({ "a": rand_base_matrix(ring, rng, 3) }),
            check: |_, v, _| {
                let a: BaseMatrix = serde_json::from_value(v["a"].clone()).unwrap();
                let right_ker = linalg::left_kernel(&a.transpose());
                let closure = linalg::howell(&linalg::left_kernel(&right_ker.transpose()));
                for r in 0..a.rows {
                    ensure(linalg::span_contains(&closure, a.row(r)), "row span escapes the closure")?;
                }
                Ok(())
            },
        },
        Property {
            name: "solve_roundtrip",
            statement: "solve finds witnesses for span members and rejects non-members",
            gen: |ring, rng, _| {
                let a = rand_base_matrix(ring, rng, 3);
                let coeffs: Vec<u64> = (0..a.rows).map(|_| rng.below(ring.modulus())).collect();
                let b = linalg::row_mul_vec(&coeffs, &a);
                let probe: Vec<u64> = (0..a.cols).map(|_| rng.below(ring.modulus())).collect();
                json!({ "a": a, "b": b, "probe": probe })
            },
            check: |_, v, _| {
                let a: BaseMatrix = serde_json::from_value(v["a"].clone()).unwrap();
                let b: Vec<u64> = serde_json::from_value(v["b"].clone()).unwrap();
                let probe: Vec<u64> = serde_json::from_value(v["probe"].clone()).unwrap();
                let x = linalg::solve_left(&a, &b).ok_or("span member not solved")?;
                ensure(linalg::row_mul_vec(&x, &a) == b, "witness fails")?;
                let h = linalg::howell(&a);
                match linalg::solve_left(&a, &probe) {
                    Some(w) => ensure(linalg::row_mul_vec(&w, &a) == probe, "probe witness fails"),
                    None => ensure(!linalg::span_contains(&h, &probe), "solvable probe rejected"),
                }
            },
        },
    ]
}

// ------------------------------------------------------------- modules

fn modules_properties() -> Vec<Property> {
    vec![
        Property {
            name: "dual_cardinality_and_biduality",
            statement: "|M^*| = |M| and the evaluation map M → M^** is bijective",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_module_instance(ring, rng, 2, 3)).unwrap(),
            check: |ring, v, _| {
                let inst: gen::ModuleInstance = serde_json::from_value(v.clone()).unwrap();
                let m = inst.build(ring);
                let bi = modules::biduality_map(&m).map_err(|e| e.to_string())?;
                ensure(
                    bi.dual.module.cardinality_exp() == m.cardinality_exp(),
                    "dual cardinality differs",
                )?;
                ensure(bi.map.is_bijective(), "biduality map is not bijective")
            },
        },
        Property {
            name: "exterior_power_free_rank",
            statement: "Λ^r of a free module of rank n is free of rank C(n, r)",
            gen: |_, rng, _| json!({ "n": 1 + rng.below(3), "r": rng.below(4) }),
            check: |ring, v, _| {
                let n = v["n"].as_u64().unwrap() as usize;
                let r = v["r"].as_u64().unwrap() as usize;
                let free = PresentedModule::free(ring.clone(), n);
                let l = modules::exterior_power(&free, r);
                let expect = wedge::binomial(n, r) as u64 * ring.cardinality_exp();
                ensure(l.cardinality_exp() == expect, "exterior power of free has wrong size")
            },
        },
        Property {
            name: "kernel_exactness",
            statement: "kernel generators map to zero and |ker|·|im| = |source|",
            gen: |ring, rng, _| {
                let b_src = 1 + rng.below(2) as usize;
                let b_tgt = 1 + rng.below(2) as usize;
                json!({
                    "b_src": b_src,
                    "b_tgt": b_tgt,
                    "matrix": gen::rand_rmatrix(ring, b_src, b_tgt, rng),
                })
            },
            check: |ring, v, _| {
                let b_src = v["b_src"].as_u64().unwrap() as usize;
                let b_tgt = v["b_tgt"].as_u64().unwrap() as usize;
                let matrix: RMatrix = serde_json::from_value(v["matrix"].clone()).unwrap();
                let src = PresentedModule::free(ring.clone(), b_src);
                let tgt = PresentedModule::free(ring.clone(), b_tgt);
                let f = modules::ModuleMap::new(src, tgt, matrix).map_err(|e| e.to_string())?;
                let (gens, ker) = modules::kernel_module(&f);
                for g in &gens {
                    ensure(f.target.is_zero_element(&f.apply(g)), "kernel generator survives")?;
                }
                ensure(
                    ker.cardinality_exp() + f.image_exp() == f.source.cardinality_exp(),
                    "cardinality bookkeeping fails",
                )
            },
        },
        Property {
            name: "socle_multiplier_contract",
            statement: "for nonzero x the multiplier r satisfies r·x ≠ 0 and m·r·x = 0",
            gen: |ring, rng, _| {
                let inst = gen::rand_module_instance(ring, rng, 2, 2);
                let coords: Vec<Vec<u64>> =
                    (0..inst.gens).map(|_| gen::rand_element(ring, rng).coeffs).collect();
                json!({ "module": inst, "coords": coords })
            },
            check: |ring, v, _| {
                let inst: gen::ModuleInstance = serde_json::from_value(v["module"].clone()).unwrap();
                let coords: Vec<Vec<u64>> = serde_json::from_value(v["coords"].clone()).unwrap();
                let m = inst.build(ring);
                let x = m.element(coords.into_iter().map(|c| RingElement { coeffs: c }).collect());
                if m.is_zero_element(&x) {
                    return Ok(());
                }
                let r = modules::socle_multiplier(&m, &x).map_err(|e| e.to_string())?;
                ensure(!m.is_zero_element(&m.scale(&r, &x)), "multiplier kills the element")?;
                for g in ring.max_ideal_gens() {
                    ensure(
                        m.is_zero_element(&m.scale(&ring.mul(g, &r), &x)),
                        "product is not in the socle",
                    )?;
                }
                Ok(())
            },
        },
        Property {
            name: "sum_tensor_hom_cardinalities",
            statement: "|M ⊕ N| = |M|·|N| and hom(R, M) has the size of M",
            gen: |ring, rng, _| {
                json!({
                    "m": gen::rand_module_instance(ring, rng, 2, 2),
                    "n": gen::rand_module_instance(ring, rng, 2, 2),
                })
            },
            check: |ring, v, _| {
                let mi: gen::ModuleInstance = serde_json::from_value(v["m"].clone()).unwrap();
                let ni: gen::ModuleInstance = serde_json::from_value(v["n"].clone()).unwrap();
                let m = mi.build(ring);
                let n = ni.build(ring);
                let s = modules::direct_sum(&m, &n).map_err(|e| e.to_string())?;
                ensure(
                    s.cardinality_exp() == m.cardinality_exp() + n.cardinality_exp(),
                    "direct sum cardinality fails",
                )?;
                let free = PresentedModule::free(ring.clone(), 1);
                let h = modules::hom(&free, &m).map_err(|e| e.to_string())?;
                ensure(h.cardinality_exp() == m.cardinality_exp(), "hom(R, M) size differs from M")
            },
        },
    ]
}

// ------------------------------------------------------------- fitting

fn parse_module(ring: &GorensteinRing, v: &Value) -> PresentedModule {
    let inst: gen::ModuleInstance = serde_json::from_value(v.clone()).unwrap();
    inst.build(ring)
}

fn fitting_properties() -> Vec<Property> {
    vec![
        Property {
            name: "surjection_monotonicity",
            statement: "a surjection M ↠ N gives Fitt^i(M) ⊆ Fitt^i(N)",
            gen: |ring, rng, _| {
                let m = gen::rand_module_instance(ring, rng, 2, 2);
                let extra = gen::rand_rmatrix(ring, 1 + rng.below(2) as usize, m.gens, rng);
                json!({ "m": m, "extra": extra })
            },
            check: |ring, v, _| {
                let m = parse_module(ring, &v["m"]);
                let extra: RMatrix = serde_json::from_value(v["extra"].clone()).unwrap();
                let n = PresentedModule::new(ring.clone(), m.gens, m.relations.vconcat(&extra));
                for i in 0..=m.gens {
                    let fm = fitting::fitting_ideal(&m, i);
                    let fn_ = fitting::fitting_ideal(&n, i);
                    ensure(fn_.contains_ideal(&fm), "monotonicity fails")?;
                }
                Ok(())
            },
        },
        Property {
            name: "subquotient_product",
            statement: "Fitt^i(N)·Fitt^j(M/N) ⊆ Fitt^{i+j}(M) for submodules N ⊆ M",
            gen: |ring, rng, _| {
                let m = gen::rand_module_instance(ring, rng, 2, 2);
                let k = 1 + rng.below(2) as usize;
                let sub = gen::rand_rmatrix(ring, k, m.gens, rng);
                json!({ "m": m, "sub": sub })
            },
            check: |ring, v, _| {
                let m = parse_module(ring, &v["m"]);
                let sub: RMatrix = serde_json::from_value(v["sub"].clone()).unwrap();
                let n = modules::present_subquotient(ring, m.gens, &sub.row_vecs(), m.relspan()).module;
                let quot = PresentedModule::new(ring.clone(), m.gens, m.relations.vconcat(&sub));
                for i in 0..=1usize {
                    for j in 0..=1usize {
                        let prod = fitting::fitting_ideal(&n, i)
                            .product(&fitting::fitting_ideal(&quot, j))
                            .unwrap();
                        let big = fitting::fitting_ideal(&m, i + j);
                        ensure(big.contains_ideal(&prod), "subquotient product escapes")?;
                    }
                }
                Ok(())
            },
        },
        Property {
            name: "direct_sum_formula",
            statement: "Fitt^i(M ⊕ N) = Σ_{a ≤ i} Fitt^a(M)·Fitt^{i−a}(N)",
            gen: |ring, rng, _| {
                json!({
                    "m": gen::rand_module_instance(ring, rng, 2, 2),
                    "n": gen::rand_module_instance(ring, rng, 2, 2),
                })
            },
            check: |ring, v, _| {
                let m = parse_module(ring, &v["m"]);
                let n = parse_module(ring, &v["n"]);
                let s = modules::direct_sum(&m, &n).unwrap();
                for i in 0..=2usize {
                    let lhs = fitting::fitting_ideal(&s, i);
                    let mut rhs = Ideal::zero(ring.clone());
                    for a in 0..=i {
                        let term = fitting::fitting_ideal(&m, a)
                            .product(&fitting::fitting_ideal(&n, i - a))
                            .unwrap();
                        rhs = rhs.sum(&term).unwrap();
                    }
                    ensure(lhs == rhs, "direct sum formula fails")?;
                }
                Ok(())
            },
        },
        Property {
            name: "base_change_exact",
            statement: "the image of Fitt^i(M) in R/(p^j) equals Fitt^i(M ⊗ R/(p^j))",
            gen: |ring, rng, _| {
                json!({
                    "m": gen::rand_module_instance(ring, rng, 2, 2),
                    "j": 1 + rng.below(ring.m() as u64),
                })
            },
            check: |ring, v, _| {
                let m = parse_module(ring, &v["m"]);
                let j = v["j"].as_u64().unwrap() as u32;
                let target = ring.quotient_ring(j).map_err(|e| e.to_string())?;
                let reduced = PresentedModule::new(
                    target.clone(),
                    m.gens,
                    m.relations.project(ring, &target),
                );
                for i in 0..=2usize {
                    let image = fitting::fitting_ideal(&m, i).project(&target);
                    let direct = fitting::fitting_ideal(&reduced, i);
                    ensure(image == direct, "base change is not exact")?;
                }
                Ok(())
            },
        },
        Property {
            name: "wedge_annihilation",
            statement: "Fitt^j(M) annihilates Λ^i M whenever j < i",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_module_instance(ring, rng, 2, 2)).unwrap(),
            check: |ring, v, _| {
                let m = parse_module(ring, v);
                for i in 1..=m.gens.min(2) {
                    let lam = modules::exterior_power(&m, i);
                    for j in 0..i {
                        let fitt = fitting::fitting_ideal(&m, j);
                        for a in &fitt.generators {
                            for g in 0..lam.gens {
                                let e = lam.scale(a, &lam.generator(g));
                                ensure(lam.is_zero_element(&e), "Fitting element fails to annihilate")?;
                            }
                        }
                    }
                }
                Ok(())
            },
        },
        Property {
            name: "char_equals_annihilator",
            statement: "char(Z) = Ann(Z), against the solver and the brute-force oracle",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_module_instance(ring, rng, 2, 2)).unwrap(),
            check: |ring, v, cfg| {
                let z = parse_module(ring, v);
                let c = fitting::characteristic_ideal(&z);
                let a = fitting::annihilator_module(&z);
                ensure(c == a, "char differs from the annihilator")?;
                if let Some(brute) = fitting::annihilator_module_bruteforce(&z, cfg.bound) {
                    ensure(a == brute, "solver annihilator differs from brute force")?;
                }
                Ok(())
            },
        },
        Property {
            name: "fitt0_within_char",
            statement: "Fitt^0(Z) ⊆ char(Z), with equality for free modules",
            gen: |ring, rng, _| {
                json!({
                    "z": gen::rand_module_instance(ring, rng, 2, 2),
                    "free_rank": rng.below(3),
                })
            },
            check: |ring, v, _| {
                let z = parse_module(ring, &v["z"]);
                ensure(
                    fitting::characteristic_ideal(&z).contains_ideal(&fitting::fitting_ideal(&z, 0)),
                    "Fitt^0 escapes char",
                )?;
                let rank = v["free_rank"].as_u64().unwrap() as usize;
                let free = PresentedModule::free(ring.clone(), rank);
                ensure(
                    fitting::characteristic_ideal(&free) == fitting::fitting_ideal(&free, 0),
                    "char of a free module differs from Fitt^0",
                )
            },
        },
        Property {
            name: "presentation_independence",
            statement: "Fitting ideals agree across presentations of the same module",
            gen: |ring, rng, _| {
                let m = gen::rand_module_instance(ring, rng, 2, 2);
                let mix: Vec<Vec<u64>> =
                    (0..m.gens).map(|_| gen::rand_element(ring, rng).coeffs).collect();
                json!({ "m": m, "mix": mix })
            },
            check: |ring, v, _| {
                let m = parse_module(ring, &v["m"]);
                let mix: Vec<RingElement> = {
                    let raw: Vec<Vec<u64>> = serde_json::from_value(v["mix"].clone()).unwrap();
                    raw.into_iter().map(|coeffs| RingElement { coeffs }).collect()
                };
                // add a redundant generator equal to Σ mix_i · e_i
                let gens2 = m.gens + 1;
                let mut rows = Vec::new();
                for r in 0..m.relations.rows {
                    let mut row = m.relations.row(r);
                    row.push(ring.zero());
                    rows.push(row);
                }
                let mut glue = mix.clone();
                glue.push(ring.neg(&ring.one()));
                rows.push(glue);
                let m2 = PresentedModule::new(ring.clone(), gens2, RMatrix::from_rows(rows));
                for i in 0..=2usize {
                    ensure(
                        fitting::fitting_ideal(&m, i) == fitting::fitting_ideal(&m2, i),
                        "presentations disagree",
                    )?;
                }
                Ok(())
            },
        },
        Property {
            name: "char_subobject_containment",
            statement: "char(M) ⊆ char(N) ∩ char(M/N) for submodules N",
            gen: |ring, rng, _| {
                let m = gen::rand_module_instance(ring, rng, 2, 2);
                let sub = gen::rand_rmatrix(ring, 1 + rng.below(2) as usize, m.gens, rng);
                json!({ "m": m, "sub": sub })
            },
            check: |ring, v, _| {
                let m = parse_module(ring, &v["m"]);
                let sub: RMatrix = serde_json::from_value(v["sub"].clone()).unwrap();
                let n = modules::present_subquotient(ring, m.gens, &sub.row_vecs(), m.relspan()).module;
                let quot = PresentedModule::new(ring.clone(), m.gens, m.relations.vconcat(&sub));
                let cm = fitting::characteristic_ideal(&m);
                let cn = fitting::characteristic_ideal(&n);
                let cq = fitting::characteristic_ideal(&quot);
                ensure(cn.contains_ideal(&cm), "char(M) escapes char(N)")?;
                ensure(cq.contains_ideal(&cm), "char(M) escapes char(M/N)")
            },
        },
    ]
}

// ------------------------------------------------------------- biduals

fn biduals_properties() -> Vec<Property> {
    vec![
        Property {
            name: "image_equals_double_annihilator",
            statement: "im(a) = Ann(Ann(a)) for elements of exterior biduals",
            gen: |ring, rng, _| {
                let m = gen::rand_module_instance(ring, rng, 2, 2);
                let r = 1 + rng.below(2) as usize;
                json!({ "m": m, "r": r, "seed": rng.next_u64() })
            },
            check: |ring, v, _| {
                let m = parse_module(ring, &v["m"]);
                let r = v["r"].as_u64().unwrap() as usize;
                let setting = BidualSetting::new(&m, r);
                let level = setting.level(r);
                let mut rng = SplitMix64::new(v["seed"].as_u64().unwrap());
                let coords = level.bidual.module.element(
                    (0..level.bidual.module.gens).map(|_| gen::rand_element(ring, &mut rng)).collect(),
                );
                let a = BidualElement { r, coords };
                let im = setting.image_of_element(&a);
                let ann2 = setting.double_annihilator_of_element(&a);
                ensure(im == ann2, "im(a) differs from Ann(Ann(a))")
            },
        },
        Property {
            name: "kernel_bidual_exactness",
            statement: "the carrier of the bidual of a kernel matches the presented bidual in size",
            gen: |ring, rng, _| {
                let d = 1 + rng.below(3) as usize;
                let s = 1 + rng.below(2) as usize;
                json!({ "d": d, "f": gen::rand_rmatrix(ring, d, s, rng), "r": 1 + rng.below(2) })
            },
            check: |ring, v, _| {
                let d = v["d"].as_u64().unwrap() as usize;
                let f: RMatrix = serde_json::from_value(v["f"].clone()).unwrap();
                let r = v["r"].as_u64().unwrap() as usize;
                if r > d {
                    return Ok(());
                }
                let kb = KernelBidual::from_map(ring.clone(), d, f);
                let carrier = kb.carrier_span(r);
                // presented route: present the kernel and take its bidual
                let gens = kb.kernel_gens();
                let zero = BaseMatrix::zero(0, d * ring.size(), ring.modulus());
                let n_mod = modules::present_subquotient(ring, d, &gens, &zero).module;
                let setting = BidualSetting::new(&n_mod, r);
                ensure(
                    linalg::span_size_exp(&carrier)
                        == setting.level(r).bidual.module.cardinality_exp(),
                    "carrier and presented bidual sizes differ",
                )
            },
        },
        Property {
            name: "membership_criterion",
            statement: "the carrier equals the span cut out by reductions landing in the first bidual",
            gen: |ring, rng, _| {
                let d = 1 + rng.below(3) as usize;
                let s = 1 + rng.below(2) as usize;
                json!({ "d": d, "f": gen::rand_rmatrix(ring, d, s, rng), "r": 1 + rng.below(2) })
            },
            check: |ring, v, _| {
                let d = v["d"].as_u64().unwrap() as usize;
                let f: RMatrix = serde_json::from_value(v["f"].clone()).unwrap();
                let r = v["r"].as_u64().unwrap() as usize;
                if r > d || r == 0 {
                    return Ok(());
                }
                let kb = KernelBidual::from_map(ring.clone(), d, f);
                let carrier = kb.carrier_span(r);
                let w1 = kb.carrier_span(1);
                // criterion: w such that every monomial contraction lands in W_1
                let g = ring.size();
                let mut big: Option<BaseMatrix> = None;
                let mut vblocks = 0usize;
                for j_set in wedge::subsets(d, r - 1) {
                    // contraction against the monomial of J lands in Λ^1
                    let mut cm = RMatrix::zero(ring, wedge::binomial(d, r), d);
                    for (ki, k_set) in wedge::subsets(d, r).iter().enumerate() {
                        if j_set.iter().all(|x| k_set.contains(x)) {
                            let extra: Vec<usize> =
                                k_set.iter().copied().filter(|x| !j_set.contains(x)).collect();
                            let j = extra[0];
                            let sign = wedge::shuffle_sign(&j_set, &[j]);
                            let val = if sign >= 0 { ring.one() } else { ring.neg(&ring.one()) };
                            cm.set(ki, j, val);
                        }
                    }
                    let e = cm.expand(ring);
                    big = Some(match big.take() {
                        None => e,
                        Some(acc) => acc.hconcat(&e),
                    });
                    vblocks += 1;
                }
                let big = big.unwrap();
                let mut vrows = Vec::new();
                let block_cols = d * g;
                for b in 0..vblocks {
                    for row in 0..w1.rows {
                        let mut r2 = vec![0u64; vblocks * block_cols];
                        r2[b * block_cols..(b + 1) * block_cols].copy_from_slice(w1.row(row));
                        vrows.push(r2);
                    }
                }
                let vspan = linalg::howell(&BaseMatrix::from_rows(
                    vrows,
                    vblocks * block_cols,
                    ring.modulus(),
                ));
                let criterion = modules::preimage_span(&big, &vspan);
                ensure(criterion == carrier, "criterion span differs from the carrier")
            },
        },
        Property {
            name: "reduced_map_lands_in_kernel_bidual",
            statement: "the wedge of the coordinate maps sends ∩^r M into ∩^{r−s} N",
            gen: |ring, rng, _| {
                let s = 1 + rng.below(2) as usize;
                let extra = 1 + rng.below(2) as usize;
                let d = s + extra;
                let r = s + rng.below(extra as u64 + 1) as usize;
                let w: Vec<Vec<u64>> = (0..wedge::binomial(d, r))
                    .map(|_| gen::rand_element(ring, rng).coeffs)
                    .collect();
                json!({ "d": d, "f": gen::rand_rmatrix(ring, d, s, rng), "r": r, "w": w })
            },
            check: |ring, v, _| {
                let d = v["d"].as_u64().unwrap() as usize;
                let f: RMatrix = serde_json::from_value(v["f"].clone()).unwrap();
                let r = v["r"].as_u64().unwrap() as usize;
                let w: Vec<RingElement> = {
                    let raw: Vec<Vec<u64>> = serde_json::from_value(v["w"].clone()).unwrap();
                    raw.into_iter().map(|coeffs| RingElement { coeffs }).collect()
                };
                let s = f.cols;
                let kb = KernelBidual::from_map(ring.clone(), d, f);
                let reduced = kb.reduced_map(r, &w);
                ensure(kb.carrier_contains(r - s, &reduced), "reduced image escapes ∩^{r−s} N")?;
                // composing with any single coordinate map vanishes
                if r - s >= 1 {
                    for i in 0..s {
                        let again =
                            biduals::contract_free(ring, d, r - s, &reduced, &kb.f.col(i));
                        ensure(
                            again.iter().all(|x| ring.is_zero(x)),
                            "f_i does not kill the reduced image",
                        )?;
                    }
                }
                Ok(())
            },
        },
        Property {
            name: "rank_reduce_functorial",
            statement: "reducing by f then f' equals reducing by f ∧ f'",
            gen: |ring, rng, _| {
                let m = gen::rand_module_instance(ring, rng, 2, 2);
                json!({ "m": m, "seed": rng.next_u64() })
            },
            check: |ring, v, _| {
                let m = parse_module(ring, &v["m"]);
                let r = 2usize;
                let setting = BidualSetting::new(&m, r);
                let level = setting.level(r);
                let nd = setting.m_dual.module.gens;
                let mut rng = SplitMix64::new(v["seed"].as_u64().unwrap());
                let coords = level.bidual.module.element(
                    (0..level.bidual.module.gens).map(|_| gen::rand_element(ring, &mut rng)).collect(),
                );
                let a = BidualElement { r, coords };
                let f: Vec<RingElement> = (0..nd).map(|_| gen::rand_element(ring, &mut rng)).collect();
                let fp: Vec<RingElement> = (0..nd).map(|_| gen::rand_element(ring, &mut rng)).collect();
                let ff = setting.wedge_coords(1, &f, 1, &fp);
                let both = setting.rank_reduce(&a, 2, &ff).map_err(|e| e.to_string())?;
                let one = setting.rank_reduce(&a, 1, &f).map_err(|e| e.to_string())?;
                let two = setting.rank_reduce(&one, 1, &fp).map_err(|e| e.to_string())?;
                ensure(both == two, "rank reduction is not functorial")
            },
        },
    ]
}

// ----------------------------------------------------------- complexes

fn parse_complex(ring: &GorensteinRing, v: &Value) -> QuadraticComplex {
    let inst: gen::ComplexInstance = serde_json::from_value(v.clone()).unwrap();
    inst.build(ring)
}

fn complexes_properties() -> Vec<Property> {
    vec![
        Property {
            name: "theta_image_membership",
            statement: "the image of ϑ lies in ∩^r H^0(C)",
            gen: |ring, rng, _| {
                json!({
                    "c": gen::rand_complex_instance(ring, rng, 3, 2),
                    "alpha": gen::rand_element(ring, rng).coeffs,
                })
            },
            check: |ring, v, _| {
                let c = parse_complex(ring, &v["c"]);
                let alpha = RingElement { coeffs: serde_json::from_value(v["alpha"].clone()).unwrap() };
                let t = complexes::theta(&c, &alpha).map_err(|e| e.to_string())?;
                let kb = c.kernel_bidual();
                ensure(kb.carrier_contains(c.chi() as usize, &t), "theta image escapes the bidual")
            },
        },
        Property {
            name: "evaluation_ideal_identity",
            statement: "the evaluation ideal of ϑ equals Fitt^0(H^1(C))",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_complex_instance(ring, rng, 3, 2)).unwrap(),
            check: |ring, v, _| {
                let c = parse_complex(ring, v);
                let ev = complexes::evaluation_ideal(&c).map_err(|e| e.to_string())?;
                ensure(ev == fitting::fitting_ideal(&c.h1(), 0), "evaluation ideal differs")?;
                // on the same instances, the theta image sits inside ∩^r H^0
                let t = complexes::theta(&c, &ring.one()).map_err(|e| e.to_string())?;
                let kb = c.kernel_bidual();
                ensure(kb.carrier_contains(c.chi() as usize, &t), "theta image escapes the bidual")
            },
        },
        Property {
            name: "theta_factorization_injective",
            statement: "id ⊗ a ↦ ϑ(a) is injective on Fitt^0(H^1)^* ⊗ Det and Fitt^0 kills its cokernel",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_complex_instance(ring, rng, 2, 2)).unwrap(),
            check: |ring, v, _| {
                let c = parse_complex(ring, v);
                let r = c.chi() as usize;
                let fitt = fitting::fitting_ideal(&c.h1(), 0);
                if fitt.is_zero() {
                    // Hom((0), R) = 0: the factorized map is trivially injective
                    return Ok(());
                }
                // the ideal as a module with its inclusion generators
                let rows: Vec<Vec<RingElement>> =
                    fitt.generators.iter().map(|g| vec![g.clone()]).collect();
                let zero = BaseMatrix::zero(0, ring.size(), ring.modulus());
                let ideal_mod = modules::present_subquotient(ring, 1, &rows, &zero);
                let idual = modules::dual(&ideal_mod.module);
                // the map Hom(I, R) → Λ^r F0 built from the minors
                let all: Vec<usize> = (0..c.d).collect();
                let cols: Vec<usize> = (0..c.e).collect();
                let monos = wedge::subsets(c.d, r);
                let mut vrows = Vec::new();
                for h in &idual.hom_vectors {
                    let mut row = vec![ring.zero(); monos.len()];
                    for (ji, j_set) in monos.iter().enumerate() {
                        let comp: Vec<usize> =
                            all.iter().copied().filter(|x| !j_set.contains(x)).collect();
                        let minor = fitting::minor_det(ring, &c.phi, &comp, &cols);
                        let coords = rmatrix::rspan_solve(
                            ring,
                            &ideal_mod.gens,
                            &[minor.clone()],
                        )
                        .ok_or("minor escapes its own ideal")?;
                        // φ(minor) with the shuffle sign of the pairing
                        let mut val = ring.zero();
                        for (ci, hv) in coords.iter().zip(h.iter()) {
                            val = ring.add(&val, &ring.mul(ci, hv));
                        }
                        let sign = wedge::shuffle_sign(&comp, j_set);
                        row[ji] = if sign >= 0 { val } else { ring.neg(&val) };
                    }
                    vrows.push(row);
                }
                let free = PresentedModule::free(ring.clone(), monos.len());
                let map = modules::ModuleMap::new(
                    idual.module.clone(),
                    free,
                    RMatrix::from_rows(vrows.clone()),
                )
                .map_err(|e| e.to_string())?;
                ensure(map.is_injective(), "factorized theta map is not injective")?;
                // Fitt^0(H^1) annihilates the cokernel inside the carrier
                let kb = c.kernel_bidual();
                let carrier = kb.carrier_span(r);
                let image = rmatrix::rspan(ring, &vrows, monos.len());
                for a in &fitt.generators {
                    for row in 0..carrier.rows {
                        let w = rmatrix::group_vec(ring, carrier.row(row));
                        let scaled: Vec<RingElement> = w.iter().map(|x| ring.mul(a, x)).collect();
                        ensure(
                            linalg::span_contains(&image, &rmatrix::expand_vec(ring, &scaled)),
                            "Fitt^0 does not annihilate the cokernel",
                        )?;
                    }
                }
                Ok(())
            },
        },
        Property {
            name: "extension_diagram_sign",
            statement: "extending by free generators commutes with ϑ up to (−1)^{rn}",
            gen: |ring, rng, _| {
                let c = gen::rand_complex_instance(ring, rng, 2, 2);
                let n = rng.below(3) as usize;
                let cols: Vec<Vec<Vec<u64>>> = (0..n)
                    .map(|_| (0..c.e).map(|_| gen::rand_element(ring, rng).coeffs).collect())
                    .collect();
                json!({ "c": c, "columns": cols })
            },
            check: |ring, v, _| {
                let c = parse_complex(ring, &v["c"]);
                let raw: Vec<Vec<Vec<u64>>> = serde_json::from_value(v["columns"].clone()).unwrap();
                let columns: Vec<Vec<RingElement>> = raw
                    .into_iter()
                    .map(|col| col.into_iter().map(|coeffs| RingElement { coeffs }).collect())
                    .collect();
                ensure(
                    complexes::extension_diagram_commutes(&c, &columns).map_err(|e| e.to_string())?,
                    "extension square does not commute with the stated sign",
                )
            },
        },
        Property {
            name: "quotient_theta_base_change",
            statement: "ϑ then reduce equals reduce then ϑ for coefficient quotients",
            gen: |ring, rng, _| {
                json!({
                    "q": gen::rand_quotient_instance(ring, rng, 2, 2),
                    "j": 1 + rng.below(ring.m() as u64),
                })
            },
            check: |ring, v, _| {
                let q: gen::QuotientInstance = serde_json::from_value(v["q"].clone()).unwrap();
                let j = v["j"].as_u64().unwrap() as u32;
                let c = q.complex.build(ring);
                let top = complexes::theta_with_quotient(&c, &q.rho).map_err(|e| e.to_string())?;
                let target = ring.quotient_ring(j).map_err(|e| e.to_string())?;
                let c2 = c.project(&target);
                let rho2 = q.rho.project(ring, &target);
                let bottom =
                    complexes::theta_with_quotient(&c2, &rho2).map_err(|e| e.to_string())?;
                let reduced: Vec<RingElement> =
                    top.theta.iter().map(|x| ring.project(&target, x)).collect();
                ensure(
                    rmatrix::expand_vec(&target, &reduced)
                        == rmatrix::expand_vec(&target, &bottom.theta),
                    "base change square does not commute",
                )
            },
        },
        Property {
            name: "quotient_theta_basis_change",
            statement: "changing the quotient basis scales ϑ by the determinant of the change",
            gen: |ring, rng, _| {
                json!({
                    "q": gen::rand_quotient_instance(ring, rng, 2, 2),
                    "seed": rng.next_u64(),
                })
            },
            check: |ring, v, _| {
                let q: gen::QuotientInstance = serde_json::from_value(v["q"].clone()).unwrap();
                let c = q.complex.build(ring);
                let base = complexes::theta_with_quotient(&c, &q.rho).map_err(|e| e.to_string())?;
                let r_y = q.rho.cols;
                if r_y == 0 {
                    return Ok(());
                }
                let mut rng = SplitMix64::new(v["seed"].as_u64().unwrap());
                let w = gen::rand_invertible(ring, r_y, &mut rng);
                let w_inv = complexes::invert(ring, &w).ok_or("change of basis not invertible")?;
                let rho2 = q.rho.mul(ring, &w_inv);
                let changed =
                    complexes::theta_with_quotient(&c, &rho2).map_err(|e| e.to_string())?;
                let det_w = fitting::det(ring, &w);
                let scaled: Vec<RingElement> =
                    base.theta.iter().map(|x| ring.mul(&det_w, x)).collect();
                ensure(
                    rmatrix::expand_vec(ring, &scaled) == rmatrix::expand_vec(ring, &changed.theta),
                    "basis change does not scale by det",
                )
            },
        },
        Property {
            name: "theta_resolution_independent",
            statement: "adding an identity block to the resolution leaves ϑ unchanged",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_complex_instance(ring, rng, 2, 2)).unwrap(),
            check: |ring, v, _| {
                let c = parse_complex(ring, v);
                let base = complexes::theta(&c, &ring.one()).map_err(|e| e.to_string())?;
                let mut rows = Vec::new();
                for row in c.phi.row_vecs() {
                    let mut nr = row;
                    nr.push(ring.zero());
                    rows.push(nr);
                }
                let mut last = vec![ring.zero(); c.e + 1];
                last[c.e] = ring.one();
                rows.push(last);
                let ext = QuadraticComplex::new(ring.clone(), RMatrix::from_rows(rows));
                let t_ext = complexes::theta(&ext, &ring.one()).map_err(|e| e.to_string())?;
                let r = c.chi() as usize;
                for (ji, j_set) in wedge::subsets(c.d + 1, r).iter().enumerate() {
                    if j_set.contains(&c.d) {
                        ensure(ring.is_zero(&t_ext[ji]), "new coordinate appears in theta")?;
                    } else {
                        let idx = wedge::subset_index(c.d, j_set);
                        ensure(t_ext[ji] == base[idx], "theta changed under resolution padding")?;
                    }
                }
                Ok(())
            },
        },
        Property {
            name: "fitting_shift_identity",
            statement: "Fitt^{i+r} of the dual complex H^1 equals Fitt^i of ker(H^1 → Y)",
            gen: |ring, rng, _| {
                json!({
                    "q": gen::rand_quotient_instance(ring, rng, 2, 2),
                    "i": rng.below(3),
                })
            },
            check: |ring, v, _| {
                let q: gen::QuotientInstance = serde_json::from_value(v["q"].clone()).unwrap();
                let i = v["i"].as_u64().unwrap() as usize;
                let c = q.complex.build(ring);
                ensure(
                    complexes::fitting_shift_check(&c, &q.rho, i),
                    "Fitting shift identity fails on the transpose route",
                )?;
                ensure(
                    complexes::fitting_shift_check_via_h0_dual(&c, &q.rho, i),
                    "Fitting shift identity fails on the H^0-dual route",
                )
            },
        },
        Property {
            name: "eagon_northcott_h0",
            statement: "∂∘∂ = 0 and H^0 of the Eagon-Northcott complex is R/Fitt^0(coker φ)",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_en_instance(ring, rng, 4)).unwrap(),
            check: |ring, v, _| {
                let c = parse_complex(ring, v);
                let en = complexes::eagon_northcott(&c);
                ensure(en.differentials_compose_to_zero(), "differentials do not compose to zero")?;
                let h0 = en.cohomology(en.positions() - 1);
                let fitt = fitting::fitting_ideal(&c.h1(), 0);
                let expected = PresentedModule::quotient_by_ideal(ring.clone(), &fitt);
                ensure(
                    h0.module.cardinality_exp() == expected.cardinality_exp(),
                    "H^0 cardinality differs from R/Fitt^0",
                )?;
                ensure(
                    fitting::annihilator_module(&h0.module)
                        == fitting::annihilator_module(&expected),
                    "H^0 annihilator differs from Fitt^0 quotient",
                )
            },
        },
        Property {
            name: "eagon_northcott_annihilation",
            statement: "Fitt^0(coker φ) annihilates every cohomology of the Eagon-Northcott complex",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_en_instance(ring, rng, 4)).unwrap(),
            check: |ring, v, _| {
                let c = parse_complex(ring, v);
                let en = complexes::eagon_northcott(&c);
                ensure(complexes::en_annihilation_check(&c, &en), "annihilation fails")
            },
        },
    ]
}

// --------------------------------------------------------------- stark

fn stark_properties() -> Vec<Property> {
    vec![
        Property {
            name: "family_five_term_exact",
            statement: "each covering pair yields the exact five-term sequence through Z_S",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_family_instance(ring, rng, 3)).unwrap(),
            check: |ring, v, _| {
                let inst: gen::FamilyInstance = serde_json::from_value(v.clone()).unwrap();
                let fam = inst.build(ring);
                for s in fam.all_subsets() {
                    for vtx in 0..fam.vertex_count() {
                        if !s.contains(&vtx) {
                            ensure(fam.five_term_exact(&s, vtx), "five-term sequence not exact")?;
                        }
                    }
                }
                Ok(())
            },
        },
        Property {
            name: "stark_space_compatible",
            statement: "generators and samples of SS^r satisfy the signed transition relations",
            gen: |ring, rng, _| {
                json!({
                    "f": gen::rand_family_instance(ring, rng, 2),
                    "seed": rng.next_u64(),
                })
            },
            check: |ring, v, _| {
                let inst: gen::FamilyInstance = serde_json::from_value(v["f"].clone()).unwrap();
                let fam = inst.build(ring);
                let r = fam.rank() as usize;
                let space = stark::stark_space(&fam, r).map_err(|e| e.to_string())?;
                for g in &space.generators {
                    ensure(space.is_compatible(&fam, g), "generator is incompatible")?;
                }
                let mut rng = SplitMix64::new(v["seed"].as_u64().unwrap());
                for _ in 0..3 {
                    let sys = space.sample(&fam, &mut rng);
                    ensure(space.is_compatible(&fam, &sys), "sample is incompatible")?;
                }
                Ok(())
            },
        },
        Property {
            name: "det_to_stark_valid",
            statement: "theta of a compatible determinant family is a Stark system",
            gen: |ring, rng, _| {
                json!({
                    "f": gen::rand_family_instance(ring, rng, 2),
                    "alpha": gen::rand_element(ring, rng).coeffs,
                })
            },
            check: |ring, v, _| {
                let inst: gen::FamilyInstance = serde_json::from_value(v["f"].clone()).unwrap();
                let fam = inst.build(ring);
                let r = fam.rank() as usize;
                let space = stark::stark_space(&fam, r).map_err(|e| e.to_string())?;
                let alpha = RingElement { coeffs: serde_json::from_value(v["alpha"].clone()).unwrap() };
                let alphas = stark::det_family_from_empty(&fam, &alpha);
                let sys = stark::det_to_stark(&fam, &alphas, &space).map_err(|e| e.to_string())?;
                ensure(space.is_compatible(&fam, &sys), "det_to_stark output incompatible")
            },
        },
        Property {
            name: "regulator_coordinate_functionals",
            statement: "with ψ_v = f_v the regulator returns sgn(S, ∅)·eps_∅ at every subset",
            gen: |ring, rng, _| {
                json!({
                    "f": gen::rand_family_instance(ring, rng, 2),
                    "seed": rng.next_u64(),
                })
            },
            check: |ring, v, _| {
                let inst: gen::FamilyInstance = serde_json::from_value(v["f"].clone()).unwrap();
                let fam = inst.build(ring);
                let r = fam.rank() as usize;
                let space = stark::stark_space(&fam, r).map_err(|e| e.to_string())?;
                let mut rng = SplitMix64::new(v["seed"].as_u64().unwrap());
                let eps = space.sample(&fam, &mut rng);
                let mut psi = Vec::new();
                for vtx in 0..fam.vertex_count() {
                    let mut cov = vec![ring.zero(); fam.vertex_count() + fam.base.d];
                    cov[vtx] = ring.one();
                    psi.push(cov);
                }
                let reg = stark::regulator(&fam, &psi, &eps);
                let empty_idx = space.subset_index(&vec![]);
                for (si, s) in space.subsets.iter().enumerate() {
                    // embed eps_∅ into the S-carrier layout step by step
                    let mut expected = eps.components[empty_idx].clone();
                    let mut grown: Vec<usize> = Vec::new();
                    for &vtx in s {
                        expected = fam.embed_into(&grown, vtx, r, &expected);
                        grown.push(vtx);
                        grown.sort_unstable();
                    }
                    let sgn = stark::sign(s, &vec![]).unwrap();
                    if sgn < 0 {
                        expected = expected.iter().map(|x| ring.neg(x)).collect();
                    }
                    ensure(
                        rmatrix::expand_vec(ring, &reg[si]) == rmatrix::expand_vec(ring, &expected),
                        "regulator value differs from the signed transition image",
                    )?;
                }
                Ok(())
            },
        },
        Property {
            name: "sign_convention",
            statement: "sgn matches its defining examples and the merge-corrected chain rule",
            gen: |_, rng, _| json!({ "seed": rng.next_u64() }),
            check: |_, v, _| {
                ensure(stark::sign(&vec![0, 1], &vec![0]).unwrap() == -1, "sgn({v1,v2},{v1}) must be −1")?;
                ensure(stark::sign(&vec![0, 1], &vec![1]).unwrap() == 1, "sgn({v1,v2},{v2}) must be +1")?;
                ensure(stark::sign(&vec![0, 1], &vec![0, 1]).unwrap() == 1, "sgn(S,S) must be +1")?;
                let mut rng = SplitMix64::new(v["seed"].as_u64().unwrap());
                // random chain in the lattice over 4 vertices
                let full: Vec<usize> = (0..4).collect();
                let pick = |rng: &mut SplitMix64, sup: &Vec<usize>| -> Vec<usize> {
                    sup.iter().copied().filter(|_| rng.below(2) == 1).collect()
                };
                let s1 = pick(&mut rng, &full);
                let s0 = pick(&mut rng, &s1);
                let lhs = stark::sign(&full, &s0).unwrap();
                let rhs = stark::sign(&full, &s1).unwrap()
                    * stark::sign(&s1, &s0).unwrap()
                    * stark::sign_chain_correction(&full, &s1, &s0);
                ensure(lhs == rhs, "merge-corrected chain rule fails")
            },
        },
        Property {
            name: "core_theorems",
            statement: "the stabilizing-subset annihilation, char containment, and Fitting bounds hold",
            gen: |ring, rng, _| {
                json!({
                    "f": gen::rand_family_instance(ring, rng, 3),
                    "seed": rng.next_u64(),
                    "samples": 20,
                })
            },
            check: |ring, v, _| {
                let inst: gen::FamilyInstance = serde_json::from_value(v["f"].clone()).unwrap();
                let fam = inst.build(ring);
                let r = fam.rank() as usize;
                let space = stark::stark_space(&fam, r).map_err(|e| e.to_string())?;
                let verifier = stark::CoreVerifier::new(&fam, r, &space).map_err(|e| e.to_string())?;
                ensure(verifier.kernel_annihilated, "projection kernel is not annihilated")?;
                let mut rng = SplitMix64::new(v["seed"].as_u64().unwrap());
                let samples = v["samples"].as_u64().unwrap_or(20);
                for _ in 0..samples {
                    let eps = space.sample(&fam, &mut rng);
                    let report = verifier.check(&eps);
                    ensure(report.all_pass(), "a core check failed")?;
                }
                Ok(())
            },
        },
    ]
}

// ----------------------------------------------------------- kolyvagin

fn kolyvagin_properties() -> Vec<Property> {
    vec![
        Property {
            name: "derivative_telescoping",
            statement: "(σ−1)·D = |G| − N_G in Z[C_n] for every order up to 16",
            gen: |_, _, _| json!({}),
            check: |_, _, _| {
                for order in 2..=16u64 {
                    ensure(kolyvagin::derivative_telescopes(order), "telescoping identity fails")?;
                }
                // product bookkeeping over a two-prime modulus
                let d = kolyvagin::derivative_product(&[2, 4]);
                for j1 in 0..2i64 {
                    for j2 in 0..4i64 {
                        let idx = (j1 * 4 + j2) as usize;
                        ensure(d.coeffs[idx] == j1 * j2, "product degree bookkeeping fails")?;
                    }
                }
                Ok(())
            },
        },
        Property {
            name: "combination_linearity",
            statement: "κ is linear in the derivative inputs and affine-linear in each table entry",
            gen: |ring, rng, _| {
                let nu = 2 + rng.below(2) as usize;
                let table = gen::rand_table_instance(ring, rng, nu);
                let w_rank = 2usize;
                let mk = |rng: &mut SplitMix64| -> BTreeMap<String, Vec<Vec<u64>>> {
                    let mut out = BTreeMap::new();
                    for size in 0..=nu {
                        for subset in wedge::subsets(nu, size) {
                            let key = subset.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                            out.insert(
                                key,
                                (0..w_rank).map(|_| gen::rand_element(ring, rng).coeffs).collect(),
                            );
                        }
                    }
                    out
                };
                json!({
                    "nu": nu,
                    "x": table,
                    "ka": mk(rng),
                    "kb": mk(rng),
                    "entry_l": 1, "entry_q": 0,
                    "t0": gen::rand_element(ring, rng).coeffs,
                    "t1": gen::rand_element(ring, rng).coeffs,
                })
            },
            check: |ring, v, _| {
                let nu = v["nu"].as_u64().unwrap() as usize;
                let table: gen::TableInstance = serde_json::from_value(v["x"].clone()).unwrap();
                let x = table.build();
                let w = PresentedModule::free(ring.clone(), 2);
                let parse_inputs = |key: &str| -> kolyvagin::DerivativeInputs {
                    let raw: BTreeMap<String, Vec<Vec<u64>>> =
                        serde_json::from_value(v[key].clone()).unwrap();
                    raw.into_iter()
                        .map(|(k, coords)| {
                            let divisor: Vec<usize> = if k.is_empty() {
                                Vec::new()
                            } else {
                                k.split(',').map(|s| s.parse().unwrap()).collect()
                            };
                            let elem = w.element(
                                coords.into_iter().map(|c| RingElement { coeffs: c }).collect(),
                            );
                            (divisor, elem)
                        })
                        .collect()
                };
                let ka = parse_inputs("ka");
                let kb = parse_inputs("kb");
                let n: Vec<usize> = (0..nu).collect();
                let va = kolyvagin::kolyvagin_combination(&w, &ka, &x, &n).map_err(|e| e.to_string())?;
                let vb = kolyvagin::kolyvagin_combination(&w, &kb, &x, &n).map_err(|e| e.to_string())?;
                let mut sum = kolyvagin::DerivativeInputs::new();
                for (k, a) in &ka {
                    sum.insert(k.clone(), w.add(a, &kb[k]));
                }
                let vs = kolyvagin::kolyvagin_combination(&w, &sum, &x, &n).map_err(|e| e.to_string())?;
                ensure(vs == w.add(&va, &vb), "linearity in the inputs fails")?;
                // affine-linearity in a single table entry
                let l = v["entry_l"].as_u64().unwrap() as usize;
                let q = v["entry_q"].as_u64().unwrap() as usize;
                let t0 = RingElement { coeffs: serde_json::from_value(v["t0"].clone()).unwrap() };
                let t1 = RingElement { coeffs: serde_json::from_value(v["t1"].clone()).unwrap() };
                let with_entry = |t: &RingElement| -> kolyvagin::TransitionTable {
                    let mut e = x.entries.clone();
                    e.insert((l, q), t.clone());
                    kolyvagin::TransitionTable { entries: e }
                };
                let f = |t: &RingElement| {
                    kolyvagin::kolyvagin_combination(&w, &ka, &with_entry(t), &n).unwrap()
                };
                let lhs = w.add(&f(&t0), &f(&t1));
                let rhs = w.add(&f(&ring.add(&t0, &t1)), &f(&ring.zero()));
                ensure(lhs == rhs, "affine-linearity in a table entry fails")
            },
        },
        Property {
            name: "stabilizer_rearrangement",
            statement: "the derivative sum rearranges over the stabilizer of each prime",
            gen: |ring, rng, _| {
                let nu = 1 + rng.below(4) as usize;
                json!({
                    "nu": nu,
                    "x": gen::rand_table_instance(ring, rng, nu),
                    "q": rng.below(nu as u64),
                })
            },
            check: |ring, v, _| {
                let nu = v["nu"].as_u64().unwrap() as usize;
                let table: gen::TableInstance = serde_json::from_value(v["x"].clone()).unwrap();
                let x = table.build();
                let q = v["q"].as_u64().unwrap() as usize;
                let n: Vec<usize> = (0..nu).collect();
                // free inputs make the identity formal in the κ' values
                let w = PresentedModule::free(ring.clone(), 1 << nu);
                let mut kp = kolyvagin::DerivativeInputs::new();
                let mut idx = 0;
                for size in 0..=nu {
                    for subset in wedge::subsets(nu, size) {
                        kp.insert(subset, w.generator(idx));
                        idx += 1;
                    }
                }
                ensure(
                    kolyvagin::stabilizer_rearrangement_check(&w, &kp, &x, &n, q)
                        .map_err(|e| e.to_string())?,
                    "stabilizer rearrangement fails",
                )
            },
        },
        Property {
            name: "cofactor_identity",
            statement: "f·c_f = c_f·f = det(f)·I for the adjugate",
            gen: |ring, rng, _| {
                let k = 1 + rng.below(3) as usize;
                json!({ "f": gen::rand_rmatrix(ring, k, k, rng) })
            },
            check: |ring, v, _| {
                let f: RMatrix = serde_json::from_value(v["f"].clone()).unwrap();
                let c = kolyvagin::cofactor(ring, &f);
                let d = fitting::det(ring, &f);
                let left = f.mul(ring, &c);
                let right = c.mul(ring, &f);
                for i in 0..f.rows {
                    for j in 0..f.rows {
                        let expect = if i == j { d.clone() } else { ring.zero() };
                        ensure(*left.at(i, j) == expect, "f·c_f differs from det·I")?;
                        ensure(*right.at(i, j) == expect, "c_f·f differs from det·I")?;
                    }
                }
                Ok(())
            },
        },
        Property {
            name: "cofactor_iso_bijective",
            statement: "the cofactor map A/(τ−1)A → A^{τ=1} is bijective under corank one",
            gen: |ring, rng, _| json!({ "tau": gen::rand_corank_one_tau(ring, rng, 3) }),
            check: |ring, v, _| {
                let tau: RMatrix = serde_json::from_value(v["tau"].clone()).unwrap();
                let iso = kolyvagin::cofactor_iso(ring, &tau).map_err(|e| e.to_string())?;
                ensure(iso.is_bijective(), "cofactor map is not bijective")?;
                // composing with τ−1 into the kernel is zero
                let mut t = tau.clone();
                for i in 0..t.rows {
                    t.set(i, i, ring.sub(t.at(i, i), &ring.one()));
                }
                let c = kolyvagin::cofactor(ring, &t);
                ensure(t.mul(ring, &c).is_zero(ring), "(τ−1)∘c_f is nonzero")
            },
        },
    ]
}

// -------------------------------------------------------------- limits

fn limits_properties() -> Vec<Property> {
    vec![
        Property {
            name: "fitting_tower",
            statement: "Fitting ideals are base-change exact and nested down the tower",
            gen: |ring, rng, _| {
                json!({
                    "m": gen::rand_module_instance(ring, rng, 2, 2),
                    "r": rng.below(3),
                })
            },
            check: |ring, v, _| {
                let tower = limits::RingTower::new(ring.p(), 3, ring.group().clone())
                    .map_err(|e| e.to_string())?;
                let inst: gen::ModuleInstance = serde_json::from_value(v["m"].clone()).unwrap();
                // reinterpret the instance over the top of the tower
                let top = tower.top().clone();
                let lifted = RMatrix {
                    rows: inst.relations.rows,
                    cols: inst.relations.cols,
                    entries: inst
                        .relations
                        .entries
                        .iter()
                        .map(|e| RingElement {
                            coeffs: e.coeffs.iter().map(|&c| c % top.modulus()).collect(),
                        })
                        .collect(),
                };
                let m = PresentedModule::new(top.clone(), inst.gens, lifted);
                let mt = limits::ModuleTower::new(&tower, m);
                let r = v["r"].as_u64().unwrap() as usize;
                let rep = limits::fitting_tower_check(&mt, r);
                ensure(rep.all_pass(), "tower check fails")
            },
        },
        Property {
            name: "torsion_dual_isomorphism",
            statement: "(M[a_n])^* is isomorphic to M^*/a_n·M^* via the canonical embedding",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_module_instance(ring, rng, 2, 2)).unwrap(),
            check: |ring, v, _| {
                if ring.m() < 2 {
                    // need an adjacent lower level
                    let lifted = ring.quotient_ring(1).map(|_| ()).map_err(|e| e.to_string());
                    return lifted.map(|_| ());
                }
                let inst: gen::ModuleInstance = serde_json::from_value(v.clone()).unwrap();
                let m = inst.build(ring);
                let small = ring.quotient_ring(ring.m() - 1).map_err(|e| e.to_string())?;
                ensure(
                    limits::torsion_dual_check(&m, &small).map_err(|e| e.to_string())?,
                    "torsion dual map is not bijective",
                )
            },
        },
        Property {
            name: "tor_transition_square",
            statement: "Tor_1 transitions respect cycles, Fitting annihilation, and the cokernel match",
            gen: |ring, rng, _| serde_json::to_value(gen::rand_module_instance(ring, rng, 2, 2)).unwrap(),
            check: |ring, v, _| {
                let tower = limits::RingTower::new(ring.p(), 3, ring.group().clone())
                    .map_err(|e| e.to_string())?;
                let inst: gen::ModuleInstance = serde_json::from_value(v.clone()).unwrap();
                let top = tower.top().clone();
                let lifted = RMatrix {
                    rows: inst.relations.rows,
                    cols: inst.relations.cols,
                    entries: inst
                        .relations
                        .entries
                        .iter()
                        .map(|e| RingElement {
                            coeffs: e.coeffs.iter().map(|&c| c % top.modulus()).collect(),
                        })
                        .collect(),
                };
                let m = PresentedModule::new(top.clone(), inst.gens, lifted);
                // adjacent levels (3 → 2) and (2 → 1) with S-exponents
                for (level, sbig, ssmall) in [(2usize, 2u32, 1u32), (1usize, 1u32, 1u32)] {
                    let big_ring = tower.level(level + 1);
                    let m_at = PresentedModule::new(
                        big_ring.clone(),
                        m.gens,
                        m.relations.project(&top, big_ring),
                    );
                    let rep =
                        limits::tor_transition_check(&m_at, tower.level(level), sbig, ssmall);
                    ensure(rep.all_pass(), "Tor transition fails")?;
                }
                Ok(())
            },
        },
    ]
}
