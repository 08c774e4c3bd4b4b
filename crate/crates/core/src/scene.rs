//! Line-oriented scene files.
//!
//! ```text
//! kappa 0
//! piece sq1 polygon 0 0 1 0 1 1 0 1
//! piece I segment 0 0 3.14159 0
//! arc a sq1 sides 0 1
//! arc b sq1 side 2 from 0.25 to 0.75
//! arc v I vertex 0
//! glue g a + b -
//! glue f fold c
//! verify samples=10000 seed=1 h=0.02,0.01,0.005 tolfactor=4 bias=0.7
//! ```
//!
//! `-` reverses the arclength parametrization of the member it follows.

use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::model::{ArcSupport, ComplexSpec, Piece};
use crate::verify::VerifierConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub spec: ComplexSpec<f64>,
    pub config: VerifierConfig,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    end: usize,
}

impl<'a> Line<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse { line: self.number, column, message: message.into() }
    }

    fn at(&self, i: usize, what: &str) -> Result<Token<'a>> {
        self.tokens.get(i).copied().ok_or_else(|| self.error(self.end, format!("expected {what}")))
    }

    fn number(&self, i: usize, what: &str) -> Result<f64> {
        let t = self.at(i, what)?;
        match t.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(t.column, format!("malformed number '{}'", t.text))),
        }
    }

    fn index(&self, i: usize, what: &str) -> Result<usize> {
        let t = self.at(i, what)?;
        t.text.parse::<usize>().map_err(|_| self.error(t.column, format!("malformed index '{}'", t.text)))
    }

    fn ident(&self, i: usize, what: &str) -> Result<&'a str> {
        let t = self.at(i, what)?;
        let mut chars = t.text.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if ok {
            Ok(t.text)
        } else {
            Err(self.error(t.column, format!("malformed identifier '{}'", t.text)))
        }
    }

    fn keyword(&self, i: usize, word: &str) -> Result<()> {
        let t = self.at(i, &format!("'{word}'"))?;
        if t.text == word {
            Ok(())
        } else {
            Err(self.error(t.column, format!("expected '{word}', found '{}'", t.text)))
        }
    }

    fn finish(&self, i: usize) -> Result<()> {
        match self.tokens.get(i) {
            Some(t) => Err(self.error(t.column, format!("unexpected '{}'", t.text))),
            None => Ok(()),
        }
    }
}

fn tokenize(number: usize, raw: &str) -> Line<'_> {
    let text = raw.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token { text: &text[s..i], column: s + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    Line { number, tokens, end: text.trim_end().len() + 1 }
}

fn parse_points(line: &Line, from: usize) -> Result<Vec<Point2<f64>>> {
    let rest = line.tokens.len().saturating_sub(from);
    if rest % 2 == 1 {
        return Err(line.error(line.tokens[line.tokens.len() - 1].column, "odd number of coordinates"));
    }
    (0..rest / 2)
        .map(|k| Ok(Point2::new(line.number(from + 2 * k, "x")?, line.number(from + 2 * k + 1, "y")?)))
        .collect()
}

fn parse_verify(line: &Line, config: &mut VerifierConfig) -> Result<()> {
    for t in &line.tokens[1..] {
        let Some((key, value)) = t.text.split_once('=') else {
            return Err(line.error(t.column, format!("expected key=value, found '{}'", t.text)));
        };
        let vcol = t.column + key.len() + 1;
        let real = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| line.error(vcol, format!("malformed number '{v}'")))
        };
        match key {
            "samples" => {
                config.sample_count =
                    value.parse().map_err(|_| line.error(vcol, format!("malformed count '{value}'")))?
            }
            "seed" => config.seed = value.parse().map_err(|_| line.error(vcol, format!("malformed seed '{value}'")))?,
            "h" => config.h_schedule = value.split(',').map(real).collect::<Result<_>>()?,
            "tolfactor" => config.angle_tolerance_factor = real(value)?,
            "bias" => config.bias = real(value)?,
            "focus" => config.focus = real(value)?,
            _ => return Err(line.error(t.column, format!("unknown verify key '{key}'"))),
        }
    }
    config.check().map_err(|e| line.error(line.tokens[0].column, e.to_string()))
}

/// Parses scene text into a resolved spec and verifier settings.
pub fn parse_scene(text: &str) -> Result<Scene> {
    let mut spec = ComplexSpec::new(0.0)?;
    let mut config = VerifierConfig::default();
    let mut seen_kappa = false;
    for (i, raw) in text.lines().enumerate() {
        let line = tokenize(i + 1, raw);
        let Some(head) = line.tokens.first() else { continue };
        match head.text {
            "kappa" => {
                if seen_kappa {
                    return Err(line.error(head.column, "duplicate kappa"));
                }
                let k = line.number(1, "curvature")?;
                line.finish(2)?;
                let mut fresh = ComplexSpec::new(k).map_err(|e| line.error(line.tokens[1].column, e.to_string()))?;
                fresh.pieces = std::mem::take(&mut spec.pieces);
                fresh.arcs = std::mem::take(&mut spec.arcs);
                fresh.gluings = std::mem::take(&mut spec.gluings);
                spec = fresh;
                seen_kappa = true;
            }
            "piece" => {
                let name = line.ident(1, "piece id")?;
                if spec.piece_index(name).is_some() {
                    return Err(line.error(line.tokens[1].column, format!("duplicate piece '{name}'")));
                }
                let kind = line.at(2, "'polygon' or 'segment'")?;
                let pts = parse_points(&line, 3)?;
                let piece = match kind.text {
                    "polygon" => {
                        if pts.len() < 3 {
                            return Err(line.error(kind.column, "polygon needs at least three vertices"));
                        }
                        Piece::polygon(name, pts)
                    }
                    "segment" => {
                        if pts.len() != 2 {
                            return Err(line.error(kind.column, "segment needs exactly two endpoints"));
                        }
                        Piece::segment(name, pts[0], pts[1])
                    }
                    other => return Err(line.error(kind.column, format!("unknown piece kind '{other}'"))),
                };
                spec.add_piece(piece);
            }
            "arc" => {
                let name = line.ident(1, "arc id")?;
                if spec.arc_index(name).is_some() {
                    return Err(line.error(line.tokens[1].column, format!("duplicate arc '{name}'")));
                }
                let piece = line.ident(2, "piece id")?;
                if spec.piece_index(piece).is_none() {
                    return Err(line.error(line.tokens[2].column, format!("unknown piece '{piece}'")));
                }
                let kind = line.at(3, "'sides', 'side' or 'vertex'")?;
                let support = match kind.text {
                    "sides" => {
                        let sides = (4..line.tokens.len()).map(|k| line.index(k, "side")).collect::<Result<Vec<_>>>()?;
                        if sides.is_empty() {
                            return Err(line.error(line.end, "expected side indices"));
                        }
                        ArcSupport::Sides(sides)
                    }
                    "side" => {
                        let side = line.index(4, "side")?;
                        line.keyword(5, "from")?;
                        let from = line.number(6, "start parameter")?;
                        line.keyword(7, "to")?;
                        let to = line.number(8, "end parameter")?;
                        line.finish(9)?;
                        ArcSupport::SubSide { side, from, to }
                    }
                    "vertex" => {
                        let v = line.index(4, "vertex")?;
                        line.finish(5)?;
                        ArcSupport::Vertex(v)
                    }
                    other => return Err(line.error(kind.column, format!("unknown arc kind '{other}'"))),
                };
                spec.add_arc(name, piece, support)?;
            }
            "glue" => {
                let name = line.ident(1, "class id")?;
                let arc_known = |k: usize| -> Result<&str> {
                    let a = line.ident(k, "arc id")?;
                    match spec.arc_index(a) {
                        Some(_) => Ok(a),
                        None => Err(line.error(line.tokens[k].column, format!("unknown arc '{a}'"))),
                    }
                };
                if line.at(2, "arc id or 'fold'")?.text == "fold" {
                    let arc = arc_known(3)?;
                    line.finish(4)?;
                    spec.fold(name, arc)?;
                } else {
                    let mut members = Vec::new();
                    let mut k = 2;
                    while k < line.tokens.len() {
                        let arc = arc_known(k)?;
                        let o = line.at(k + 1, "orientation '+' or '-'")?;
                        let reversed = match o.text {
                            "+" => false,
                            "-" => true,
                            other => return Err(line.error(o.column, format!("expected '+' or '-', found '{other}'"))),
                        };
                        members.push((arc, reversed));
                        k += 2;
                    }
                    spec.glue(name, &members)?;
                }
            }
            "verify" => parse_verify(&line, &mut config)?,
            other => return Err(line.error(head.column, format!("unknown statement '{other}'"))),
        }
    }
    if spec.pieces.is_empty() {
        return Err(Error::Parse { line: text.lines().count().max(1), column: 1, message: "no pieces".into() });
    }
    Ok(Scene { spec, config })
}

pub fn load_scene(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_scene(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, FindingCode, ValidationStatus};

    const PILLOWCASE: &str = "\
# two unit squares, boundaries identified
kappa 0
piece sq1 polygon 0 0 1 0 1 1 0 1
piece sq2 polygon 0 0 1 0 1 1 0 1
arc a1 sq1 sides 0
arc a2 sq1 sides 1
arc a3 sq1 sides 2
arc a4 sq1 sides 3
arc b1 sq2 sides 0
arc b2 sq2 sides 1
arc b3 sq2 sides 2
arc b4 sq2 sides 3
glue g1 a1 + b1 +
glue g2 a2 + b2 +
glue g3 a3 + b3 +
glue g4 a4 + b4 +
";

    fn parse_err(text: &str) -> (usize, usize, String) {
        match parse_scene(text) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn pillowcase_counts() {
        let s = parse_scene(PILLOWCASE).unwrap();
        assert_eq!(s.spec.pieces.len(), 2);
        assert_eq!(s.spec.arcs.len(), 8);
        assert_eq!(s.spec.gluings.len(), 4);
        assert_eq!(validate(&s.spec).status(), ValidationStatus::Valid);
        assert_eq!(s.config, VerifierConfig::default());
    }

    #[test]
    fn length_mismatch_parses_then_fails_validation() {
        let s = parse_scene(
            "piece A polygon 0 0 1 0 1 1 0 1\npiece B polygon 0 0 2 0 2 1 0 1\narc a A sides 0\narc b B sides 0\nglue g1 a + b +\n",
        )
        .unwrap();
        assert!(validate(&s.spec).has(FindingCode::ClassLengthMismatch));
    }

    #[test]
    fn empty_file() {
        assert_eq!(parse_err("").2, "no pieces");
        assert_eq!(parse_err("# nothing\n\nkappa 1\n").2, "no pieces");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_err("piece A polygon 0 0 1 x 0 1").0, 1);
        assert_eq!(parse_err("piece A polygon 0 0 1 x 0 1").1, 23);
        let (line, column, msg) = parse_err("piece A polygon 0 0 1 0 0 1\narc a B sides 0");
        assert_eq!((line, column), (2, 7));
        assert!(msg.contains("unknown piece"));
        let (line, column, _) = parse_err("piece A polygon 0 0 1 0 0 1\narc a A sides 0\nglue g a + c -");
        assert_eq!((line, column), (3, 12));
        assert_eq!(parse_err("piece A polygon 0 0 1 0 0 1\narc a A sides 0\nglue g a *").1, 10);
        assert_eq!(parse_err("frobnicate").2, "unknown statement 'frobnicate'");
        assert_eq!(parse_err("kappa nan").1, 7);
    }

    #[test]
    fn orientation_and_fold() {
        let s = parse_scene(
            "kappa 1\npiece A polygon 0 0 1 0 1 1 0 1\narc a A sides 0\narc b A sides 2\narc c A side 1 from 0.25 to 0.75\nglue g a + b -\nglue f fold c\n",
        )
        .unwrap();
        assert_eq!(s.spec.kappa(), 1.0);
        assert!(!s.spec.gluings[0].members[0].reversed);
        assert!(s.spec.gluings[0].members[1].reversed);
        assert!(s.spec.gluings[1].self_fold);
        assert_eq!(s.spec.arcs[2].support, ArcSupport::SubSide { side: 1, from: 0.25, to: 0.75 });
    }

    #[test]
    fn verify_line() {
        let s = parse_scene("piece A segment 0 0 1 0\nverify samples=50 seed=9 h=0.1,0.05 tolfactor=2 bias=0.5\n").unwrap();
        assert_eq!(s.config.sample_count, 50);
        assert_eq!(s.config.seed, 9);
        assert_eq!(s.config.h_schedule, vec![0.1, 0.05]);
        assert_eq!(s.config.angle_tolerance_factor, 2.0);
        assert_eq!(s.config.bias, 0.5);
        assert_eq!(parse_err("piece A segment 0 0 1 0\nverify h=0.1,0.2").0, 2);
        assert_eq!(parse_err("piece A segment 0 0 1 0\nverify samples=x").1, 16);
    }

    #[test]
    fn comments_and_vertex_arcs() {
        let s = parse_scene("piece I segment 0 0 3 0 # a segment\narc s I vertex 0\narc e I vertex 1\nglue j e + s +\n").unwrap();
        assert_eq!(s.spec.arcs[1].support, ArcSupport::Vertex(1));
        assert_eq!(s.spec.gluings[0].members.len(), 2);
    }
}
