//! The six-case component census predicted for `PGL_3(F_q)` and its
//! comparison against an observed [`Census`].
//!
//! Each predicted record names the family of components it describes, so
//! observed components are matched by family (pivot component, isolated
//! diagonalizable classes, unipotent classes, irreducible tori) rather than
//! by position.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{classify_prime_power, is_prime, PrimePower};
use crate::graph::{Census, CensusRecord};
use crate::mat::JordanType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremCase {
    /// q = 2.
    Two,
    /// q = 3.
    Three,
    /// q > 2 even, q - 1 prime.
    EvenMersenne,
    /// q > 2 even, q - 1 not prime.
    EvenOther,
    /// q > 3 odd, q - 1 a prime power.
    OddPrimePowerBelow,
    /// q > 3 odd, q - 1 not a prime power.
    OddOther,
}

impl TheoremCase {
    pub fn number(self) -> u8 {
        match self {
            TheoremCase::Two => 1,
            TheoremCase::Three => 2,
            TheoremCase::EvenMersenne => 3,
            TheoremCase::EvenOther => 4,
            TheoremCase::OddPrimePowerBelow => 5,
            TheoremCase::OddOther => 6,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            TheoremCase::Two => "q = 2",
            TheoremCase::Three => "q = 3",
            TheoremCase::EvenMersenne => "q even, q != 2, q - 1 prime",
            TheoremCase::EvenOther => "q even, q != 2, q - 1 not prime",
            TheoremCase::OddPrimePowerBelow => "q odd, q != 3, q - 1 a prime power",
            TheoremCase::OddOther => "q odd, q != 3, q - 1 not a prime power",
        }
    }
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case {} ({})", self.number(), self.description())
    }
}

impl Serialize for TheoremCase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

pub fn classify_case(q: u64) -> Result<TheoremCase> {
    let p = match classify_prime_power(q)? {
        PrimePower::Prime(p) | PrimePower::Power { p, .. } => p,
        PrimePower::NotPrimePower => return Err(Error::NotPrimePower(q)),
    };
    Ok(match q {
        2 => TheoremCase::Two,
        3 => TheoremCase::Three,
        _ if p == 2 && is_prime(q - 1) => TheoremCase::EvenMersenne,
        _ if p == 2 => TheoremCase::EvenOther,
        _ if classify_prime_power(q - 1)?.is_prime_power() => TheoremCase::OddPrimePowerBelow,
        _ => TheoremCase::OddOther,
    })
}

/// Which components a predicted record speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentFamily {
    /// Every component of the graph.
    All,
    /// The component holding the pivot classes.
    Pivot,
    /// Components made only of LLL vertices.
    Diagonalizable,
    /// Components made only of NPJ vertices.
    Unipotent,
    /// Components made only of Irreducible vertices.
    Irreducible,
    /// Anything else.
    Other,
}

impl ComponentFamily {
    pub fn of_types(types: &[JordanType]) -> ComponentFamily {
        if types.contains(&JordanType::Pivot) {
            return ComponentFamily::Pivot;
        }
        match types {
            [JordanType::LLL] => ComponentFamily::Diagonalizable,
            [JordanType::NPJ] => ComponentFamily::Unipotent,
            [JordanType::Irreducible] => ComponentFamily::Irreducible,
            _ => ComponentFamily::Other,
        }
    }

    fn covers(self, other: ComponentFamily) -> bool {
        self == ComponentFamily::All || self == other
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedRecord {
    pub diameter: u32,
    pub count: u64,
    pub family: ComponentFamily,
    /// Vertices per component, when the family has a fixed size.
    pub size: Option<u64>,
    pub source_clause: String,
    /// A resolved conditional ("diameter 1 if ... is prime").
    pub condition: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedCensus {
    pub q: u64,
    pub case: TheoremCase,
    pub records: Vec<PredictedRecord>,
    /// Total number of components as printed in the clause.
    pub total_components: u64,
}

/// Components of the form "nonidentity part of an embedded `F_{q^3}`":
/// `q^3 (q^2 - 1)(q - 1) / 3`.
pub fn irreducible_component_count(q: u64) -> u64 {
    q * q * q * (q * q - 1) * (q - 1) / 3
}

/// `(q^3 - 1)(q^3 - q) / (p - 1)`.
pub fn unipotent_component_count(q: u64, p: u64) -> u64 {
    (q * q * q - 1) * (q * q * q - q) / (p - 1)
}

/// `q^3 (q^3 - 1)(q + 1)(q - 3)`.
pub fn diagonalizable_component_count(q: u64) -> u64 {
    q * q * q * (q * q * q - 1) * (q + 1) * (q - 3)
}

/// Vertices in one irreducible component: `(q^3 - q) / (q - 1)`.
pub fn irreducible_component_size(q: u64) -> u64 {
    (q * q * q - q) / (q - 1)
}

pub fn predicted_census(q: u64) -> Result<PredictedCensus> {
    let case = classify_case(q)?;
    let p = crate::gf::factorize(q)[0].0;
    let irr = irreducible_component_count(q);
    let irr_size = Some(irreducible_component_size(q));
    let main = |diameter: u32, clause: &str| PredictedRecord {
        diameter,
        count: 1,
        family: ComponentFamily::Pivot,
        size: None,
        source_clause: clause.to_string(),
        condition: None,
    };
    let torus_prime = is_prime(q * q + q + 1);
    let records = match case {
        TheoremCase::Two => vec![PredictedRecord {
            diameter: 1,
            count: 51,
            family: ComponentFamily::All,
            size: None,
            source_clause: "case 1: 51 components, each of diameter 1".into(),
            condition: None,
        }],
        TheoremCase::Three => vec![
            main(11, "case 2: one component of diameter 11"),
            PredictedRecord {
                diameter: 1,
                count: 312,
                family: ComponentFamily::Unipotent,
                size: Some(p - 1),
                source_clause: "case 2: 312 components of diameter 1".into(),
                condition: None,
            },
            PredictedRecord {
                diameter: 2,
                count: 8,
                family: ComponentFamily::Irreducible,
                size: irr_size,
                source_clause: "case 2: 8 components of diameter 2".into(),
                condition: None,
            },
        ],
        TheoremCase::EvenMersenne => vec![
            main(13, "case 3: one component of diameter 13"),
            PredictedRecord {
                diameter: 1,
                count: diagonalizable_component_count(q),
                family: ComponentFamily::Diagonalizable,
                size: Some(q - 2),
                source_clause: "case 3: q^3(q^3-1)(q+1)(q-3) components of diameter 1".into(),
                condition: None,
            },
            PredictedRecord {
                diameter: if q == 8 { 1 } else { 2 },
                count: irr,
                family: ComponentFamily::Irreducible,
                size: irr_size,
                source_clause: "case 3: q^3(q^2-1)(q-1)/3 components of diameter 1 if q = 8, else 2".into(),
                condition: Some(format!("q = {q} {} 8", if q == 8 { "==" } else { "!=" })),
            },
        ],
        TheoremCase::EvenOther => vec![
            main(10, "case 4: one component of diameter 10"),
            PredictedRecord {
                diameter: 2,
                count: irr,
                family: ComponentFamily::Irreducible,
                size: irr_size,
                source_clause: "case 4: q^3(q^2-1)(q-1)/3 components of diameter 2".into(),
                condition: None,
            },
        ],
        TheoremCase::OddPrimePowerBelow => vec![
            main(12, "case 5: one component of diameter 12"),
            PredictedRecord {
                diameter: 1,
                count: unipotent_component_count(q, p),
                family: ComponentFamily::Unipotent,
                size: Some(p - 1),
                source_clause: "case 5: (q^3-1)(q^3-q)/(p-1) components of diameter 1".into(),
                condition: None,
            },
            PredictedRecord {
                diameter: if torus_prime { 1 } else { 2 },
                count: irr,
                family: ComponentFamily::Irreducible,
                size: irr_size,
                source_clause: "case 5: q^3(q^2-1)(q-1)/3 components of diameter 1 if q^2+q+1 is prime, else 2"
                    .into(),
                condition: Some(format!(
                    "q^2+q+1 = {} is {}",
                    q * q + q + 1,
                    if torus_prime { "prime" } else { "not prime" }
                )),
            },
        ],
        TheoremCase::OddOther => vec![
            main(8, "case 6: one component of diameter 8"),
            PredictedRecord {
                diameter: 2,
                count: unipotent_component_count(q, p),
                family: ComponentFamily::Unipotent,
                size: Some(p - 1),
                source_clause: "case 6: all other components have diameter 2".into(),
                condition: None,
            },
            PredictedRecord {
                diameter: 2,
                count: irr,
                family: ComponentFamily::Irreducible,
                size: irr_size,
                source_clause: "case 6: all other components have diameter 2".into(),
                condition: None,
            },
        ],
    };
    let total_components = match case {
        TheoremCase::Three => 321,
        _ => records.iter().map(|r| r.count).sum(),
    };
    Ok(PredictedCensus {
        q,
        case,
        records,
        total_components,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Confirmed,
    Discrepancy,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Confirmed => 0,
            Verdict::Discrepancy => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedEntry {
    #[serde(flatten)]
    pub record: PredictedRecord,
    pub matches: bool,
    /// Observed (diameter, count) pairs for the record's family.
    pub observed: Vec<(u32, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObservedEntry {
    #[serde(flatten)]
    pub record: CensusRecord,
    pub family: ComponentFamily,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub q: u64,
    pub case: TheoremCase,
    pub case_description: String,
    pub predicted: Vec<PredictedEntry>,
    pub observed: Vec<ObservedEntry>,
    pub predicted_components: u64,
    pub observed_components: u64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn entry(&self, family: ComponentFamily) -> Option<&PredictedEntry> {
        self.predicted.iter().find(|e| e.record.family == family)
    }
}

pub fn verify(q: u64, observed: &Census) -> Result<VerificationReport> {
    if observed.q as u64 != q {
        return Err(Error::Precondition(format!("census is for q = {}, not {q}", observed.q)));
    }
    let predicted = predicted_census(q)?;
    let p = crate::gf::factorize(q)[0].0;
    let observed_entries: Vec<ObservedEntry> = observed
        .records
        .iter()
        .map(|r| ObservedEntry {
            family: ComponentFamily::of_types(&r.types),
            record: r.clone(),
        })
        .collect();

    let mut notes = Vec::new();
    let mut all_match = true;
    let mut entries = Vec::new();
    for rec in &predicted.records {
        let mut by_diameter: BTreeMap<u32, u64> = BTreeMap::new();
        let mut sizes: BTreeMap<u64, u64> = BTreeMap::new();
        for o in observed_entries.iter().filter(|o| rec.family.covers(o.family)) {
            *by_diameter.entry(o.record.diameter).or_default() += o.record.count;
            *sizes.entry(o.record.size).or_default() += o.record.count;
        }
        let seen: Vec<(u32, u64)> = by_diameter.into_iter().collect();
        let matches = if rec.count == 0 {
            seen.is_empty()
        } else {
            seen == [(rec.diameter, rec.count)]
        };
        if !matches {
            all_match = false;
            let seen_text: Vec<String> = seen.iter().map(|(d, c)| format!("{c} of diameter {d}")).collect();
            let size_text: Vec<String> = sizes.iter().map(|(s, c)| format!("{c} of size {s}")).collect();
            notes.push(format!(
                "{}: predicted {} component(s) of diameter {}; observed {} ({})",
                rec.source_clause,
                rec.count,
                rec.diameter,
                if seen_text.is_empty() { "none".to_string() } else { seen_text.join(", ") },
                size_text.join(", ")
            ));
        }
        entries.push(PredictedEntry {
            record: rec.clone(),
            matches,
            observed: seen,
        });
    }

    for o in &observed_entries {
        if !predicted.records.iter().any(|r| r.family.covers(o.family)) {
            all_match = false;
            let types: Vec<&str> = o.record.types.iter().map(|t| t.name()).collect();
            notes.push(format!(
                "{} component(s) of size {} and diameter {} with types [{}] are not covered by any clause",
                o.record.count,
                o.record.size,
                o.record.diameter,
                types.join(", ")
            ));
        }
    }

    if observed.components != predicted.total_components {
        all_match = false;
        notes.push(format!(
            "predicted {} components in total, observed {}",
            predicted.total_components, observed.components
        ));
    }

    // Formula-versus-class-size consistency: count times size should equal
    // the number of vertices of the family's Jordan type.
    for rec in &predicted.records {
        let (ty, size) = match (rec.family, rec.size) {
            (ComponentFamily::Diagonalizable, Some(s)) => (JordanType::LLL, s),
            (ComponentFamily::Unipotent, Some(s)) => (JordanType::NPJ, s),
            (ComponentFamily::Irreducible, Some(s)) => (JordanType::Irreducible, s),
            _ => continue,
        };
        let vertices = observed.type_totals.get(&ty).copied().unwrap_or(0);
        if rec.count * size != vertices {
            let implied = if size > 0 { vertices / size } else { 0 };
            notes.push(format!(
                "{}: {} components of {} vertices need {} {} vertices, the group has {} (implying {} components)",
                rec.source_clause,
                rec.count,
                size,
                rec.count * size,
                ty,
                vertices,
                implied
            ));
        }
    }
    if p == 2 && q > 2 {
        if let Some(&n) = observed.type_totals.get(&JordanType::NPJ) {
            if observed
                .records
                .iter()
                .any(|r| r.types.contains(&JordanType::Pivot) && r.types.contains(&JordanType::NPJ))
            {
                notes.push(format!("all {n} NPJ vertices lie in the pivot component (even characteristic)"));
            }
        }
    }

    Ok(VerificationReport {
        q,
        case: predicted.case,
        case_description: predicted.case.description().to_string(),
        predicted: entries,
        observed: observed_entries,
        predicted_components: predicted.total_components,
        observed_components: observed.components,
        verdict: if all_match {
            Verdict::Confirmed
        } else {
            Verdict::Discrepancy
        },
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ComponentSummary;
    use crate::pgl::GraphKind;

    #[test]
    fn case_classification() {
        let cases: Vec<(u64, u8)> = vec![(2, 1), (3, 2), (4, 3), (5, 5), (7, 6), (8, 3), (9, 5), (11, 6), (13, 6), (16, 4), (17, 5)];
        for (q, c) in cases {
            assert_eq!(classify_case(q).unwrap().number(), c, "q = {q}");
        }
        assert_eq!(classify_case(6), Err(Error::NotPrimePower(6)));
        assert_eq!(classify_case(1), Err(Error::TooSmall(1)));
    }

    #[test]
    fn exactly_one_case_per_prime_power() {
        for q in 2..=256u64 {
            if !classify_prime_power(q).unwrap().is_prime_power() {
                continue;
            }
            let p = crate::gf::factorize(q)[0].0;
            let preds = [
                q == 2,
                q == 3,
                q != 2 && p == 2 && is_prime(q - 1),
                q != 2 && p == 2 && !is_prime(q - 1),
                q != 3 && p != 2 && classify_prime_power(q - 1).unwrap().is_prime_power(),
                q != 3 && p != 2 && !classify_prime_power(q - 1).unwrap().is_prime_power(),
            ];
            assert_eq!(preds.iter().filter(|&&b| b).count(), 1, "q = {q}");
            let c = classify_case(q).unwrap();
            assert!(preds[c.number() as usize - 1]);
        }
    }

    #[test]
    fn formula_values() {
        assert_eq!(irreducible_component_count(3), 144);
        assert_eq!(irreducible_component_count(4), 960);
        assert_eq!(irreducible_component_count(5), 4000);
        assert_eq!(unipotent_component_count(5, 5), 3720);
        assert_eq!(unipotent_component_count(3, 3), 312);
        assert_eq!(diagonalizable_component_count(4), 20160);
        assert_eq!(irreducible_component_size(3), 12);
        assert_eq!(irreducible_component_size(5), 30);
    }

    fn shape(p: &PredictedCensus) -> Vec<(u32, u64)> {
        p.records.iter().map(|r| (r.diameter, r.count)).collect()
    }

    #[test]
    fn predictions() {
        assert_eq!(shape(&predicted_census(4).unwrap()), vec![(13, 1), (1, 20160), (2, 960)]);
        assert_eq!(shape(&predicted_census(5).unwrap()), vec![(12, 1), (1, 3720), (1, 4000)]);
        let p3 = predicted_census(3).unwrap();
        assert_eq!(shape(&p3), vec![(11, 1), (1, 312), (2, 8)]);
        assert_eq!(p3.total_components, 321);
        assert_eq!(shape(&predicted_census(8).unwrap())[2].0, 1);
        // 9^2 + 9 + 1 = 91 = 7 * 13
        assert_eq!(shape(&predicted_census(9).unwrap())[2].0, 2);
        assert_eq!(shape(&predicted_census(2).unwrap()), vec![(1, 51)]);
        assert!(predicted_census(7).unwrap().records[1..].iter().all(|r| r.diameter == 2));
    }

    fn census(q: u32, components: u64, records: Vec<(u32, u64, u64, Vec<JordanType>)>) -> Census {
        let mut type_totals = BTreeMap::new();
        for (_, size, count, types) in &records {
            if types.len() == 1 {
                *type_totals.entry(types[0]).or_default() += size * count;
            }
        }
        Census {
            q,
            graph: GraphKind::Pgl,
            vertices: records.iter().map(|r| r.1 * r.2).sum(),
            edges: 0,
            components,
            records: records
                .into_iter()
                .map(|(diameter, size, count, types)| CensusRecord {
                    diameter,
                    size,
                    count,
                    types,
                })
                .collect(),
            pivot_component: Some(ComponentSummary {
                id: 0,
                size: 1,
                diameter: 12,
            }),
            type_totals,
        }
    }

    #[test]
    fn synthetic_match_is_confirmed() {
        use JordanType::*;
        let c = census(
            5,
            7721,
            vec![
                (12, 237119, 1, vec![Pivot, LLL, LP, JordanPivot, LLP]),
                (1, 30, 4000, vec![Irreducible]),
                (1, 4, 3720, vec![NPJ]),
            ],
        );
        let r = verify(5, &c).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed, "{:?}", r.notes);
        assert!(r.notes.is_empty());
    }

    #[test]
    fn synthetic_mismatch_names_the_clause() {
        use JordanType::*;
        let c = census(
            5,
            7721,
            vec![
                (12, 237119, 1, vec![Pivot, LLL, LP, JordanPivot, LLP]),
                (2, 30, 4000, vec![Irreducible]),
                (1, 4, 3720, vec![NPJ]),
            ],
        );
        let r = verify(5, &c).unwrap();
        assert_eq!(r.verdict, Verdict::Discrepancy);
        assert!(!r.entry(ComponentFamily::Irreducible).unwrap().matches);
        assert!(r.entry(ComponentFamily::Unipotent).unwrap().matches);
        assert!(r.notes.iter().any(|n| n.contains("q^2+q+1")));
        assert!(verify(4, &c).is_err());
    }

    #[test]
    fn report_serializes_with_case_number() {
        use JordanType::*;
        let c = census(5, 1, vec![(12, 10, 1, vec![Pivot])]);
        let r = verify(5, &c).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["case"], 5);
        assert_eq!(v["verdict"], "discrepancy");
        assert_eq!(v["predicted"][0]["source_clause"], "case 5: one component of diameter 12");
        assert_eq!(v["observed"][0]["family"], "pivot");
    }
}
