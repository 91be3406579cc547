//! Line-oriented text format for quivers with potential, and a compact
//! literal syntax for single representations.
//!
//! ```text
//! # three loops with a commutator potential
//! vertex 1
//! arrow x : 1 -> 1
//! arrow y : 1 -> 1
//! arrow z : 1 -> 1
//! weight x = 2
//! potential 1 x y z
//! potential -1 x z y
//! stability main : 0
//! field 4 1 1 1
//! ```
//!
//! Vertices must be declared before arrows that use them; everything else may
//! appear in any order. Arrows without a `weight` line get weight one. The
//! optional coefficients after `field <q>` give the defining polynomial,
//! constant term first.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::ffield::{prime_power, Field, FieldElem};
use crate::linalg::Mat;
use crate::quiver::{parse_rational, rational_string, DimVector, Potential, Quiver, StabilityParam, WeightFunction};
use crate::rep::Representation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDecl {
    pub q: u32,
    pub modulus: Option<Vec<u32>>,
}

impl FieldDecl {
    pub fn build(&self) -> Result<Field> {
        match &self.modulus {
            None => Field::new(self.q),
            Some(m) => {
                let (p, _) = prime_power(self.q)
                    .ok_or_else(|| Error::InvalidField(format!("{} is not a prime power", self.q)))?;
                let field = Field::with_modulus(p, m)?;
                if field.order() != self.q {
                    return Err(Error::InvalidField(format!(
                        "polynomial has degree {}, field {} needs degree {}",
                        m.len() - 1,
                        self.q,
                        prime_power(self.q).map_or(0, |(_, e)| e)
                    )));
                }
                Ok(field)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureSpec {
    pub quiver: Quiver,
    pub potential: Potential,
    pub weights: WeightFunction,
    pub stabilities: Vec<(String, StabilityParam)>,
    pub fields: Vec<FieldDecl>,
}

impl FixtureSpec {
    pub fn stability(&self, label: &str) -> Option<&StabilityParam> {
        self.stabilities.iter().find(|(l, _)| l == label).map(|(_, t)| t)
    }
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((s, c)) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: c,
                });
            }
        } else if start.is_none() {
            start = Some((i, col + 1));
        }
    }
    if let Some((s, c)) = start {
        out.push(Token {
            text: &line[s..],
            column: c,
        });
    }
    out
}

fn located(line: usize, column: usize, message: impl ToString) -> Error {
    Error::Parse {
        line,
        column,
        message: message.to_string(),
    }
}

fn check_name(line: usize, t: Token<'_>) -> Result<&str> {
    if t.text == "->" || t.text.contains([':', '=', ',']) {
        return Err(located(line, t.column, format!("invalid name `{}`", t.text)));
    }
    Ok(t.text)
}

fn expect(line: usize, t: Token<'_>, text: &str) -> Result<()> {
    if t.text != text {
        return Err(located(line, t.column, format!("expected `{text}`, found `{}`", t.text)));
    }
    Ok(())
}

struct PendingTerm<'a> {
    line: usize,
    coefficient: i64,
    arrows: Vec<Token<'a>>,
}

struct PendingWeight<'a> {
    line: usize,
    arrow: Token<'a>,
    value: u64,
}

struct PendingStability<'a> {
    line: usize,
    label: Token<'a>,
    values: Vec<Token<'a>>,
}

pub fn parse_fixture(text: &str) -> Result<FixtureSpec> {
    let mut quiver = Quiver::new(Vec::<String>::new(), Vec::<(String, &str, &str)>::new())?;
    let mut terms = Vec::new();
    let mut weights = Vec::new();
    let mut stabilities = Vec::new();
    let mut fields = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(head) = toks.first().copied() else {
            continue;
        };
        let arity = |n: usize| -> Result<()> {
            if toks.len() != n {
                let col = toks.get(n).map_or(head.column, |t| t.column);
                return Err(located(line, col, format!("`{}` takes {} fields", head.text, n - 1)));
            }
            Ok(())
        };
        match head.text {
            "vertex" => {
                arity(2)?;
                let name = check_name(line, toks[1])?;
                quiver.add_vertex(name.to_string()).map_err(|e| located(line, toks[1].column, e))?;
            }
            "arrow" => {
                arity(6)?;
                let name = check_name(line, toks[1])?;
                expect(line, toks[2], ":")?;
                expect(line, toks[4], "->")?;
                for t in [toks[3], toks[5]] {
                    quiver.vertex_id(t.text).map_err(|e| located(line, t.column, e))?;
                }
                quiver
                    .add_arrow(name.to_string(), toks[3].text, toks[5].text)
                    .map_err(|e| located(line, toks[1].column, e))?;
            }
            "potential" => {
                if toks.len() < 3 {
                    return Err(located(line, head.column, "potential term needs a coefficient and a cycle"));
                }
                let coefficient = toks[1]
                    .text
                    .parse::<i64>()
                    .map_err(|_| located(line, toks[1].column, format!("malformed coefficient `{}`", toks[1].text)))?;
                terms.push(PendingTerm {
                    line,
                    coefficient,
                    arrows: toks[2..].to_vec(),
                });
            }
            "weight" => {
                arity(4)?;
                expect(line, toks[2], "=")?;
                let value = toks[3]
                    .text
                    .parse::<u64>()
                    .map_err(|_| located(line, toks[3].column, format!("malformed weight `{}`", toks[3].text)))?;
                weights.push(PendingWeight {
                    line,
                    arrow: toks[1],
                    value,
                });
            }
            "stability" => {
                if toks.len() < 3 {
                    return Err(located(line, head.column, "stability needs a label and `:`"));
                }
                check_name(line, toks[1])?;
                expect(line, toks[2], ":")?;
                for t in &toks[3..] {
                    parse_rational(t.text).map_err(|e| located(line, t.column, e))?;
                }
                stabilities.push(PendingStability {
                    line,
                    label: toks[1],
                    values: toks[3..].to_vec(),
                });
            }
            "field" => {
                if toks.len() < 2 {
                    return Err(located(line, head.column, "field needs an order"));
                }
                let q = toks[1]
                    .text
                    .parse::<u32>()
                    .map_err(|_| located(line, toks[1].column, format!("malformed field order `{}`", toks[1].text)))?;
                let modulus = if toks.len() > 2 {
                    Some(
                        toks[2..]
                            .iter()
                            .map(|t| {
                                t.text
                                    .parse::<u32>()
                                    .map_err(|_| located(line, t.column, format!("malformed coefficient `{}`", t.text)))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    )
                } else {
                    None
                };
                let decl = FieldDecl { q, modulus };
                decl.build().map_err(|e| located(line, toks[1].column, e))?;
                fields.push(decl);
            }
            other => return Err(located(line, head.column, format!("unknown directive `{other}`"))),
        }
    }

    let mut potential = Potential::zero();
    for term in terms {
        let ids = term
            .arrows
            .iter()
            .map(|t| quiver.arrow_id(t.text).map_err(|e| located(term.line, t.column, e)))
            .collect::<Result<Vec<_>>>()?;
        potential.add_term(&quiver, term.coefficient, ids).map_err(|e| {
            let column = match &e {
                Error::NotComposable { position } => term.arrows[*position].column,
                _ => term.arrows[0].column,
            };
            located(term.line, column, e)
        })?;
    }

    let mut wt = WeightFunction::constant(&quiver, 1);
    let mut seen = HashSet::new();
    for w in weights {
        let id = quiver.arrow_id(w.arrow.text).map_err(|e| located(w.line, w.arrow.column, e))?;
        if !seen.insert(id) {
            return Err(located(w.line, w.arrow.column, format!("duplicate weight for arrow `{}`", w.arrow.text)));
        }
        wt.0[id] = w.value;
    }

    let mut thetas: Vec<(String, StabilityParam)> = Vec::new();
    for s in stabilities {
        if thetas.iter().any(|(l, _)| l == s.label.text) {
            return Err(located(s.line, s.label.column, format!("duplicate stability `{}`", s.label.text)));
        }
        if s.values.len() != quiver.num_vertices() {
            return Err(located(
                s.line,
                s.label.column,
                Error::DimensionMismatch {
                    expected: quiver.num_vertices(),
                    found: s.values.len(),
                },
            ));
        }
        let values = s.values.iter().map(|t| parse_rational(t.text)).collect::<Result<Vec<_>>>()?;
        thetas.push((s.label.text.to_string(), StabilityParam(values)));
    }

    Ok(FixtureSpec {
        quiver,
        potential,
        weights: wt,
        stabilities: thetas,
        fields,
    })
}

pub fn render_fixture(spec: &FixtureSpec) -> String {
    let q = &spec.quiver;
    let mut out = String::new();
    for v in q.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for a in q.arrows() {
        out.push_str(&format!(
            "arrow {} : {} -> {}\n",
            a.name,
            q.vertices()[a.source],
            q.vertices()[a.target]
        ));
    }
    for (id, a) in q.arrows().iter().enumerate() {
        out.push_str(&format!("weight {} = {}\n", a.name, spec.weights.of(id)));
    }
    for (c, cycle) in spec.potential.terms() {
        out.push_str(&format!("potential {c} {}\n", q.path_names(cycle)));
    }
    for (label, theta) in &spec.stabilities {
        let values = theta.to_strings();
        if values.is_empty() {
            out.push_str(&format!("stability {label} :\n"));
        } else {
            out.push_str(&format!("stability {label} : {}\n", values.join(" ")));
        }
    }
    for f in &spec.fields {
        match &f.modulus {
            None => out.push_str(&format!("field {}\n", f.q)),
            Some(m) => {
                let coeffs: Vec<String> = m.iter().map(u32::to_string).collect();
                out.push_str(&format!("field {} {}\n", f.q, coeffs.join(" ")));
            }
        }
    }
    out
}

pub const MAX_LITERAL_ENTRIES: usize = 1 << 16;

/// Parses `dim=1,1 x=[1] y=[1 0;0 1]`. Matrix entries are field element
/// indices, rows separated by `;`. Arrows that are not mentioned are zero.
pub fn parse_rep_literal(quiver: &Quiver, field: &Field, text: &str) -> Result<Representation> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut dims: Option<DimVector> = None;
    let mut given: BTreeMap<usize, (usize, Vec<Vec<u32>>)> = BTreeMap::new();
    let err = |col: usize, msg: String| located(1, col + 1, msg);
    while pos < chars.len() {
        if chars[pos].is_whitespace() {
            pos += 1;
            continue;
        }
        let key_start = pos;
        while pos < chars.len() && chars[pos] != '=' && !chars[pos].is_whitespace() {
            pos += 1;
        }
        let key: String = chars[key_start..pos].iter().collect();
        if pos >= chars.len() || chars[pos] != '=' {
            return Err(err(key_start, format!("expected `=` after `{key}`")));
        }
        pos += 1;
        let value_start = pos;
        if key == "dim" {
            while pos < chars.len() && !chars[pos].is_whitespace() {
                pos += 1;
            }
            let value: String = chars[value_start..pos].iter().collect();
            if dims.is_some() {
                return Err(err(key_start, "duplicate `dim`".into()));
            }
            let d = DimVector::parse(&value).map_err(|e| err(value_start, e.to_string()))?;
            if d.len() != quiver.num_vertices() {
                return Err(err(
                    value_start,
                    Error::DimensionMismatch {
                        expected: quiver.num_vertices(),
                        found: d.len(),
                    }
                    .to_string(),
                ));
            }
            dims = Some(d);
            continue;
        }
        let id = quiver.arrow_id(&key).map_err(|e| err(key_start, e.to_string()))?;
        if pos >= chars.len() || chars[pos] != '[' {
            return Err(err(value_start, format!("expected `[` for arrow `{key}`")));
        }
        let close = chars[pos..]
            .iter()
            .position(|c| *c == ']')
            .map(|k| pos + k)
            .ok_or_else(|| err(value_start, "unterminated matrix".into()))?;
        let body: String = chars[pos + 1..close].iter().collect();
        pos = close + 1;
        let mut rows = Vec::new();
        if !body.trim().is_empty() {
            for row in body.split(';') {
                let entries = row
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<u32>()
                            .ok()
                            .filter(|v| *v < field.order())
                            .ok_or_else(|| err(value_start, format!("`{t}` is not an element of F_{}", field.order())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(entries);
            }
        }
        if given.insert(id, (value_start, rows)).is_some() {
            return Err(err(key_start, format!("duplicate arrow `{key}`")));
        }
    }
    let dims = dims.ok_or_else(|| err(0, "missing `dim=`".into()))?;
    let mut maps = Vec::with_capacity(quiver.num_arrows());
    for (id, arrow) in quiver.arrows().iter().enumerate() {
        let (r, c) = (dims.0[arrow.target] as usize, dims.0[arrow.source] as usize);
        if r.saturating_mul(c) > MAX_LITERAL_ENTRIES {
            return Err(err(0, format!("arrow `{}` would need more than {MAX_LITERAL_ENTRIES} entries", arrow.name)));
        }
        match given.remove(&id) {
            None => maps.push(Mat::zero(r, c)),
            Some((col, rows)) => {
                let shape_ok = if r * c == 0 {
                    rows.is_empty()
                } else {
                    rows.len() == r && rows.iter().all(|row| row.len() == c)
                };
                if !shape_ok {
                    return Err(err(col, format!("arrow `{}` needs a {r}x{c} matrix", arrow.name)));
                }
                let entries = rows.into_iter().flatten().map(FieldElem).collect();
                maps.push(Mat::from_entries(r, c, entries));
            }
        }
    }
    Representation::new(quiver, dims, maps)
}

pub fn render_rep_literal(quiver: &Quiver, m: &Representation) -> String {
    let mut out = format!("dim={}", m.dims());
    for (id, arrow) in quiver.arrows().iter().enumerate() {
        let map = m.map(id);
        let rows: Vec<String> = (0..map.rows())
            .map(|r| map.row(r).iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        let body = if map.rows() * map.cols() == 0 { String::new() } else { rows.join(";") };
        out.push_str(&format!(" {}=[{}]", arrow.name, body));
    }
    out
}

/// Renders any quiver with a stability as a fixture, with unit weights unless
/// given.
pub fn quiver_fixture(quiver: &Quiver, weights: Option<&WeightFunction>, label: &str, theta: &StabilityParam) -> String {
    render_fixture(&FixtureSpec {
        quiver: quiver.clone(),
        potential: Potential::zero(),
        weights: weights.cloned().unwrap_or_else(|| WeightFunction::constant(quiver, 1)),
        stabilities: vec![(label.to_string(), theta.clone())],
        fields: Vec::new(),
    })
}

/// Stability values rendered the way the parser reads them.
pub fn theta_string(theta: &StabilityParam) -> String {
    theta.0.iter().map(rational_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A2: &str = "vertex 1\nvertex 2\narrow x : 1 -> 2\nstability main : 1 0\n";

    fn location(e: Error) -> (usize, usize, String) {
        match e {
            Error::Parse { line, column, message } => (line, column, message),
            other => panic!("unlocated error {other:?}"),
        }
    }

    #[test]
    fn minimal() {
        let spec = parse_fixture(A2).unwrap();
        assert_eq!(spec.quiver.num_vertices(), 2);
        assert_eq!(spec.quiver.num_arrows(), 1);
        assert!(spec.potential.is_zero());
        assert_eq!(spec.weights, WeightFunction(vec![1]));
        assert_eq!(spec.stability("main"), Some(&StabilityParam::from_integers(&[1, 0])));
    }

    #[test]
    fn comments_and_order() {
        let text = "# loops\nvertex 1\npotential 1 x y z   # cubic\narrow x : 1 -> 1\narrow y : 1 -> 1\narrow z : 1 -> 1\npotential -1 x z y\nweight y = 2\nfield 4 1 1 1\n";
        let spec = parse_fixture(text).unwrap();
        assert_eq!(spec.potential.len(), 2);
        assert_eq!(spec.weights, WeightFunction(vec![1, 2, 1]));
        assert_eq!(spec.fields, vec![FieldDecl { q: 4, modulus: Some(vec![1, 1, 1]) }]);
    }

    #[test]
    fn errors_are_located() {
        let (line, column, msg) = location(parse_fixture(&format!("{A2}potential 1 x zz\n")).unwrap_err());
        assert_eq!((line, column), (5, 15));
        assert!(msg.contains("zz"));

        let text = "vertex 1\nvertex 2\narrow x : 1 -> 2\narrow y : 1 -> 2\npotential 1 x y\n";
        let (line, column, msg) = location(parse_fixture(text).unwrap_err());
        assert_eq!((line, column), (5, 15));
        assert!(msg.contains("not composable"), "{msg}");

        let text = "vertex 1\nvertex 2\narrow x : 1 -> 2\narrow y : 2 -> 2\npotential 1 x y\n";
        let (line, _, msg) = location(parse_fixture(text).unwrap_err());
        assert_eq!(line, 5);
        assert!(msg.contains("open cycle"), "{msg}");

        let (line, column, msg) = location(parse_fixture("vertex 1\narrow x : 1 -> 1\narrow x : 1 -> 1\n").unwrap_err());
        assert_eq!((line, column), (3, 7));
        assert!(msg.contains("duplicate arrow"));

        let (line, column, _) = location(parse_fixture("vertex 1\narrow x : 1 -> 2\n").unwrap_err());
        assert_eq!((line, column), (2, 16));

        let (line, column, msg) = location(parse_fixture("vertex 1\nstability m : 1/0\n").unwrap_err());
        assert_eq!((line, column), (2, 15));
        assert!(msg.contains("malformed rational"));

        for bad in ["vertex\n", "arrow x 1 -> 2\n", "field 6\n", "field 4 1 0 1\n", "frobnicate\n", "weight x = -1\n"] {
            location(parse_fixture(bad).unwrap_err());
        }
        location(parse_fixture("vertex 1\nstability m : 1 2\n").unwrap_err());
        location(parse_fixture("vertex 1\narrow x : 1 -> 1\nweight x = 1\nweight x = 2\n").unwrap_err());
    }

    #[test]
    fn render_round_trip() {
        let text = "vertex a\nvertex b\narrow x : a -> b\narrow y : b -> a\nweight x = 3\npotential 2 y x\nstability s : 1/2 -3\nfield 9\n";
        let spec = parse_fixture(text).unwrap();
        let rendered = render_fixture(&spec);
        assert_eq!(parse_fixture(&rendered).unwrap(), spec);
        assert_eq!(render_fixture(&parse_fixture(&rendered).unwrap()), rendered);
    }

    #[test]
    fn rep_literals() {
        let q = Quiver::new(["1", "2"], [("x", "1", "2"), ("y", "2", "2")]).unwrap();
        let f = Field::new(3).unwrap();
        let m = parse_rep_literal(&q, &f, "dim=1,2 x=[1;2] y=[1 0;0 1]").unwrap();
        assert_eq!(m.map(0).entries(), &[FieldElem(1), FieldElem(2)]);
        assert_eq!(render_rep_literal(&q, &m), "dim=1,2 x=[1;2] y=[1 0;0 1]");
        let z = parse_rep_literal(&q, &f, "dim=1,0").unwrap();
        assert_eq!(render_rep_literal(&q, &z), "dim=1,0 x=[] y=[]");
        assert_eq!(parse_rep_literal(&q, &f, &render_rep_literal(&q, &z)).unwrap(), z);
        for bad in ["x=[1]", "dim=1,1 x=[3]", "dim=1,1 x=[1 1]", "dim=1,1 w=[1]", "dim=1 ", "dim=1,1 x=[1", "dim=1,1 x"] {
            location(parse_rep_literal(&q, &f, bad).unwrap_err());
        }
    }

    fn arb_fixture() -> impl Strategy<Value = String> {
        (1usize..4, prop::collection::vec((0usize..4, 0usize..4, 0u64..4), 0..6)).prop_flat_map(|(nv, arrows)| {
            let arrows: Vec<(usize, usize, u64)> = arrows.into_iter().map(|(s, t, w)| (s % nv, t % nv, w)).collect();
            let na = arrows.len();
            (
                Just(nv),
                Just(arrows),
                prop::collection::vec((-3i64..4, prop::collection::vec(0usize..8, 1..5)), 0..4),
                prop::collection::vec(prop::collection::vec((-5i64..6, 1i64..4), nv), 0..3),
                prop::option::of(prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9])),
            )
                .prop_map(move |(nv, arrows, walks, thetas, field)| {
                    let mut text = String::new();
                    for v in 0..nv {
                        text.push_str(&format!("vertex v{v}\n"));
                    }
                    for (i, (s, t, w)) in arrows.iter().enumerate() {
                        text.push_str(&format!("arrow a{i} : v{s} -> v{t}\nweight a{i} = {w}\n"));
                    }
                    // keep only random walks that close up
                    if na > 0 {
                        for (c, steps) in walks {
                            let first = steps[0] % na;
                            let mut at = arrows[first].1;
                            let mut cycle = vec![first];
                            for s in &steps[1..] {
                                let out: Vec<usize> = (0..na).filter(|a| arrows[*a].0 == at).collect();
                                if out.is_empty() {
                                    break;
                                }
                                let a = out[s % out.len()];
                                at = arrows[a].1;
                                cycle.push(a);
                            }
                            if at == arrows[first].0 {
                                let names: Vec<String> = cycle.iter().map(|a| format!("a{a}")).collect();
                                text.push_str(&format!("potential {c} {}\n", names.join(" ")));
                            }
                        }
                    }
                    for (k, theta) in thetas.iter().enumerate() {
                        let vals: Vec<String> = theta.iter().map(|(n, d)| format!("{n}/{d}")).collect();
                        text.push_str(&format!("stability t{k} : {}\n", vals.join(" ")));
                    }
                    if let Some(q) = field {
                        text.push_str(&format!("field {q}\n"));
                    }
                    text
                })
        })
    }

    proptest! {
        #[test]
        fn round_trip(text in arb_fixture()) {
            let spec = parse_fixture(&text).unwrap();
            let rendered = render_fixture(&spec);
            prop_assert_eq!(parse_fixture(&rendered).unwrap(), spec);
        }

        #[test]
        fn never_panics(text in "\\PC{0,200}") {
            let _ = parse_fixture(&text);
        }
    }
}
