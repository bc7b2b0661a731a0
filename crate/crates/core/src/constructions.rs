//! Named codes and constructions: the small non-box-convex codes, sunflower
//! codes with their interval factors, the weak monotonicity extension, the
//! non-monotonicity example, and the classification of convex codes on three
//! indices by box dimension.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::code::{
    canonical_form, first_downward_violation, intersection_product, maximal_codewords,
    product_of_all, simplicial_complex, Code, Codeword, WordSet,
};
use crate::dim::{all_codes, bdim, full_closure, Bdim};
use crate::error::{Error, Result};
use crate::interval::is_interval_code;

pub const NAMED_CODES: [&str; 6] = ["C1", "C2", "C3", "C4", "rectangles", "nonmono_base"];

pub fn named_code(name: &str) -> Result<Code> {
    let (n, text) = match name.to_ascii_lowercase().as_str() {
        "c1" => (3, "123, 12, 13, 23, ∅"),
        "c2" => (3, "123, 12, 13, 23, 1, ∅"),
        "c3" => (3, "12, 13, 23, 1, 2, 3, ∅"),
        "c4" => (4, "1234, 12, 13, 14, ∅"),
        "rectangles" => (4, "123, 24, 12, 13, 23, 1, 2, 3, 4, ∅"),
        "nonmono_base" => (4, "1234, 12, 13, ∅"),
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    Code::parse_text(text, Some(n))
}

/// The sunflower code `F_n = {[n], 1, ..., n, ∅}` and its `n / 2` interval
/// factors `{[n], 2i - 1, 2i, ∅}`.
pub fn sunflower(n: usize) -> Result<(Code, Vec<Code>)> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::BadSunflowerSize { n });
    }
    let full = Codeword::full(n);
    let code = Code::new(n, (1..=n).map(Codeword::singleton).chain([full]))?;
    let factors = (1..=n / 2)
        .map(|i| {
            Code::new(
                n,
                [full, Codeword::singleton(2 * i - 1), Codeword::singleton(2 * i)],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let product = product_of_all(&factors)?.expect("at least one factor");
    assert_eq!(product, code, "sunflower factors do not multiply to F_{n}");
    Ok((code, factors))
}

/// `Δ(c) \ c` as a word set.
pub fn complex_minus_code(c: &Code) -> WordSet {
    let mut ambient = simplicial_complex(c).word_set();
    for w in c.words() {
        ambient.remove(w);
    }
    ambient
}

/// For `d` downward closed in `Δ(c) \ c`, returns `(c ∪ d, E)` with
/// `E = d ∪ {[n], ∅}`, checking that `c ⋒ E = c ∪ d`.
pub fn weak_monotone_extension(c: &Code, d: &WordSet) -> Result<(Code, Code)> {
    let ambient = complex_minus_code(c);
    if let Some(w) = d.iter().find(|w| !ambient.contains(w)) {
        return Err(Error::NotInAmbient {
            word: w.to_string(),
        });
    }
    if let Some((w, missing)) = first_downward_violation(d, &ambient) {
        return Err(Error::NotDownwardClosed {
            word: w.to_string(),
            missing: missing.to_string(),
        });
    }
    let n = c.n();
    let union = c.with_words(d.iter().copied())?;
    let extension = Code::new(n, d.iter().copied().chain([Codeword::full(n)]))?;
    assert_eq!(
        intersection_product(c, &extension)?,
        union,
        "c ⋒ E differs from c ∪ d"
    );
    assert_eq!(maximal_codewords(&extension), vec![Codeword::full(n)]);
    Ok((union, extension))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonMonotonicityWitness {
    pub base: Code,
    pub extension: Code,
    pub base_is_interval_code: bool,
    pub sandwiched: bool,
    pub extension_bdim: Bdim,
}

impl NonMonotonicityWitness {
    pub fn holds(&self) -> bool {
        self.base_is_interval_code
            && self.sandwiched
            && matches!(self.extension_bdim, Bdim::NotBoxConvex { .. })
    }
}

/// `C = {1234, 12, 13, ∅}` is an interval code, `C ⊆ C4 ⊆ Δ(C)`, and `C4` is
/// not box-convex.
pub fn nonmonotonicity_witness() -> Result<NonMonotonicityWitness> {
    let base = named_code("nonmono_base")?;
    let extension = named_code("C4")?;
    let sandwiched =
        base.is_subset_of(&extension) && extension.is_subset_of(&simplicial_complex(&base));
    Ok(NonMonotonicityWitness {
        base_is_interval_code: is_interval_code(&base),
        extension_bdim: bdim(&extension)?,
        sandwiched,
        base,
        extension,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxClass {
    Interval,
    Dim2,
    NotBoxConvex,
}

impl BoxClass {
    pub fn of(b: Bdim) -> Option<BoxClass> {
        match b {
            Bdim::Dim(1) => Some(BoxClass::Interval),
            Bdim::Dim(2) => Some(BoxClass::Dim2),
            Bdim::NotBoxConvex { .. } => Some(BoxClass::NotBoxConvex),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedCode {
    /// Canonical representative.
    pub code: Code,
    #[serde(flatten)]
    pub bdim: Bdim,
    pub class: Option<BoxClass>,
    /// Every index appears in some codeword.
    pub uses_all_indices: bool,
}

/// Every max-intersection-complete code on `{1, 2, 3}` with at least one
/// nonempty codeword, up to relabeling, with its box dimension.
pub fn classify_three_index() -> Result<Vec<ClassifiedCode>> {
    let closure = full_closure(3)?;
    let mut reps = std::collections::BTreeSet::new();
    for c in all_codes(3)? {
        if c.len() > 1 && c.is_max_intersection_complete() {
            reps.insert(canonical_form(&c).0);
        }
    }
    Ok(reps
        .into_iter()
        .map(|code| {
            let b = closure.bdim_of(&code);
            ClassifiedCode {
                uses_all_indices: code.unused_indices().is_empty(),
                class: BoxClass::of(b),
                bdim: b,
                code,
            }
        })
        .collect())
}

/// Reference table: class name to codes in text form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenTable {
    pub n: usize,
    pub classes: BTreeMap<BoxClass, Vec<String>>,
}

impl GoldenTable {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical forms grouped by class.
    pub fn canonical(&self) -> Result<BTreeMap<BoxClass, std::collections::BTreeSet<Code>>> {
        let mut out = BTreeMap::new();
        for (class, codes) in &self.classes {
            let set = codes
                .iter()
                .map(|t| Code::parse_text(t, Some(self.n)).map(|c| canonical_form(&c).0))
                .collect::<Result<_>>()?;
            out.insert(*class, set);
        }
        Ok(out)
    }
}

/// The classification as canonical forms grouped by class.
pub fn classification_by_class(
    table: &[ClassifiedCode],
) -> BTreeMap<BoxClass, std::collections::BTreeSet<Code>> {
    let mut out: BTreeMap<BoxClass, std::collections::BTreeSet<Code>> = BTreeMap::new();
    for row in table {
        if let Some(class) = row.class {
            out.entry(class).or_default().insert(row.code.clone());
        }
    }
    out
}

/// Reference table of the three-index convex codes by box class.
pub const THREE_INDEX_GOLDEN: &str = include_str!("../golden/classify3.json");
