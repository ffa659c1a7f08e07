//! Stacked transmit vectors as ordered segment lists.
//!
//! All positions are in scaled levels: when an allocation holds half-integer
//! lengths every level is doubled, so one scaled channel use stands for a
//! pair of physical ones.

use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{RateAllocation, SchemeId};
use crate::error::{Error, Result};
use crate::ld::LdParams;
use crate::rational::{qi, Q};

/// How a signal class maps its information bits to vector positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassKind {
    /// One bit per position.
    Plain,
    /// Slot of twice the information length; user 1 fills the top half,
    /// user 2 the bottom half.
    Df,
    /// Linear codeword of the slot length carrying fewer information bits.
    Coded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub name: String,
    pub kind: ClassKind,
    /// Information bits per block (scaled units).
    pub bits: usize,
    /// Vector length occupied by one copy (scaled units).
    pub len: usize,
    /// CN-type class: its block-Markov copy is sent again one block later.
    pub markov: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Content {
    Zero,
    /// Bits of a class at time k + dt, dt in {0, -1}.
    Plain {
        class: usize,
        dt: i32,
    },
    Df {
        class: usize,
    },
    Coded {
        class: usize,
    },
    Xor(Box<Content>, Box<Content>),
    /// Consecutive parts (length, content).
    Concat(Vec<(usize, Content)>),
    /// Relay only: positions `offset..offset+len` of the transmit content
    /// summed over both users one block earlier.
    RelaySum {
        content: Box<Content>,
        offset: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub label: String,
    pub start: usize,
    pub len: usize,
    pub content: Content,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Layer {
    pub segments: Vec<Segment>,
}

impl Layer {
    pub fn total_len(&self) -> usize {
        self.segments.iter().map(|s| s.start + s.len).max().unwrap_or(0)
    }
}

/// Transmit layouts of one scheme instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layouts {
    pub scheme: SchemeId,
    pub scale: u32,
    /// Channel levels multiplied by `scale`.
    pub params: LdParams,
    pub q: usize,
    pub classes: Vec<ClassInfo>,
    /// Both transmitters share this layout.
    pub tx: Layer,
    pub tx_active: [bool; 2],
    /// Relay vector is the XOR of its layers.
    pub relay: Vec<Layer>,
    /// Level gap between the two users' common slots at a receiver.
    pub common_gap: usize,
}

impl Layouts {
    pub fn class(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }
}

impl fmt::Display for Layouts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, name: &str, layer: &Layer| -> fmt::Result {
            write!(f, "{name}:")?;
            for s in &layer.segments {
                write!(f, " {}@{}+{}", s.label, s.start, s.len)?;
            }
            writeln!(f)
        };
        writeln!(f, "{} scale={} q={}", self.scheme, self.scale, self.q)?;
        show(f, "tx", &self.tx)?;
        for (i, l) in self.relay.iter().enumerate() {
            show(f, &format!("relay[{i}]"), l)?;
        }
        Ok(())
    }
}

struct Builder {
    scale: u32,
    classes: Vec<ClassInfo>,
}

impl Builder {
    fn units(&self, x: Q, what: &str) -> Result<usize> {
        let v = x * qi(self.scale as i64);
        if !v.is_integer() || v < qi(0) {
            return Err(Error::LayoutOverflow(format!(
                "{what} = {x} is not a non-negative multiple of 1/{}",
                self.scale
            )));
        }
        v.to_integer()
            .to_usize()
            .ok_or_else(|| Error::LayoutOverflow(format!("{what} out of range")))
    }

    fn class(&mut self, a: &RateAllocation, name: &str, kind: ClassKind, markov: bool) -> Result<usize> {
        let len = self.units(a.len(name), name)?;
        let info = a.info_rates().get(name).copied().unwrap_or_default();
        let bits = self.units(info, name)?;
        self.classes.push(ClassInfo {
            name: name.to_string(),
            kind,
            bits,
            len,
            markov,
        });
        Ok(self.classes.len() - 1)
    }

    fn len_of(&self, c: usize) -> usize {
        self.classes[c].len
    }
}

/// Sequential stacking of segments from the top.
struct Stack {
    pos: usize,
    layer: Layer,
}

impl Stack {
    fn new() -> Self {
        Stack {
            pos: 0,
            layer: Layer::default(),
        }
    }

    fn push(&mut self, label: &str, len: usize, content: Content) {
        self.layer.segments.push(Segment {
            label: label.to_string(),
            start: self.pos,
            len,
            content,
        });
        self.pos += len;
    }

    fn finish(mut self, q: usize, what: &str) -> Result<Layer> {
        if self.pos > q {
            return Err(Error::LayoutOverflow(format!(
                "{what} needs {} levels, only {q} available",
                self.pos
            )));
        }
        let rest = q - self.pos;
        self.push("zeros", rest, Content::Zero);
        Ok(self.layer)
    }
}

/// Relay segments placed at explicit positions.
struct Placed {
    q: usize,
    nr: usize,
    segs: Vec<Segment>,
}

impl Placed {
    fn new(q: usize, nr: usize) -> Self {
        Placed { q, nr, segs: Vec::new() }
    }

    fn put(&mut self, label: &str, start: usize, len: usize, content: Content) {
        if len > 0 {
            self.segs.push(Segment {
                label: label.to_string(),
                start,
                len,
                content,
            });
        }
    }

    /// Places the relay copy of a CN sum so that it lands on the interfering
    /// transmitter's copy at the receiver. Bits that would fall below the
    /// relay-receiver link are not sent.
    fn aligned(&mut self, label: &str, tx_pos: usize, len: usize, content: Content, nc: usize) -> Result<()> {
        if len == 0 {
            return Ok(());
        }
        let start = tx_pos as i64 + self.nr as i64 - nc as i64;
        if start < 0 {
            return Err(Error::LayoutOverflow(format!(
                "relay copy of {label} would start {} levels above the top",
                -start
            )));
        }
        let start = start as usize;
        let visible = len.min(self.nr.saturating_sub(start));
        self.put(
            label,
            start,
            visible,
            Content::RelaySum {
                content: Box::new(content),
                offset: 0,
            },
        );
        Ok(())
    }

    fn finish(mut self, what: &str) -> Result<Layer> {
        self.segs.sort_by_key(|s| s.start);
        let mut end = 0;
        for s in &self.segs {
            if s.start < end {
                return Err(Error::LayoutOverflow(format!(
                    "{what}: segment {} overlaps its predecessor",
                    s.label
                )));
            }
            end = s.start + s.len;
        }
        if end > self.q {
            return Err(Error::LayoutOverflow(format!(
                "{what} needs {end} levels, only {} available",
                self.q
            )));
        }
        Ok(Layer { segments: self.segs })
    }
}

fn sum_of(c: Content) -> Content {
    Content::RelaySum {
        content: Box::new(c),
        offset: 0,
    }
}

fn plain(class: usize, dt: i32) -> Content {
    Content::Plain { class, dt }
}

/// Builds the transmit and relay layouts for an allocation.
pub fn build_layouts(scheme: SchemeId, p: &LdParams, a: &RateAllocation) -> Result<Layouts> {
    let same = a.scheme == scheme || (a.scheme.is_wi3() && scheme.is_wi3());
    if !same {
        return Err(Error::InvalidInput(format!("allocation is for {}, not {scheme}", a.scheme)));
    }
    let scale = a.integral_scale();
    let sp = p.scaled(scale);
    let q = sp.q() as usize;
    let (nd, nc, nr) = (sp.nd as usize, sp.nc as usize, sp.nr as usize);
    let mut b = Builder {
        scale,
        classes: Vec::new(),
    };
    let mut tx = Stack::new();
    let mut relay = Placed::new(q, nr);
    let mut extra_layers = Vec::new();
    let mut tx_active = [true, true];
    let mut common_gap = 0;
    match a.scheme {
        SchemeId::II => {
            let cm = b.class(a, "cm", ClassKind::Plain, false)?;
            let df = b.class(a, "df", ClassKind::Plain, false)?;
            tx.push("cm", b.len_of(cm), plain(cm, 0));
            tx.push("df", b.len_of(df), plain(df, 0));
            relay.put("df", 0, b.len_of(df), sum_of(plain(df, 0)));
            tx_active = [true, false];
        }
        SchemeId::WI1 => {
            let cn1 = b.class(a, "cn1", ClassKind::Plain, true)?;
            let cn2 = b.class(a, "cn2", ClassKind::Plain, true)?;
            let df1 = b.class(a, "df1", ClassKind::Df, false)?;
            let df2 = b.class(a, "df2", ClassKind::Df, false)?;
            let cf = b.class(a, "cf", ClassKind::Plain, false)?;
            let pr = b.class(a, "p", ClassKind::Plain, false)?;
            let l1 = b.units(a.pad("l1"), "l1")?;
            let (lcn1, lcn2) = (b.len_of(cn1), b.len_of(cn2));
            tx.push("l1", l1, Content::Zero);
            tx.push(
                "cn1[k-1]+df1",
                lcn1,
                Content::Xor(Box::new(plain(cn1, -1)), Box::new(Content::Df { class: df1 })),
            );
            tx.push("cn2[k-1]", lcn2, plain(cn2, -1));
            tx.push("cf", b.len_of(cf), plain(cf, 0));
            tx.push("p", b.len_of(pr), plain(pr, 0));
            let cn = Content::Concat(vec![(lcn1, plain(cn1, 0)), (lcn2, plain(cn2, 0))]);
            tx.push("cn", lcn1 + lcn2, cn.clone());
            tx.push("df2", b.len_of(df2), Content::Df { class: df2 });
            let mut top = 0;
            for (label, c) in [
                ("cf", plain(cf, 0)),
                ("df1", Content::Df { class: df1 }),
                ("df2", Content::Df { class: df2 }),
            ] {
                let len = match &c {
                    Content::Plain { class, .. } | Content::Df { class } => b.len_of(*class),
                    _ => 0,
                };
                relay.put(label, top, len, sum_of(c));
                top += len;
            }
            relay.aligned("cn", l1, lcn1 + lcn2, cn, nc)?;
        }
        SchemeId::WI2 => {
            let cm = b.class(a, "cm", ClassKind::Coded, false)?;
            let cn = b.class(a, "cn", ClassKind::Plain, true)?;
            let cf = b.class(a, "cf", ClassKind::Plain, false)?;
            let p1 = b.class(a, "p1", ClassKind::Plain, false)?;
            let p2 = b.class(a, "p2", ClassKind::Plain, false)?;
            common_gap = nd - nc;
            let lcm = b.len_of(cm);
            let lcn = b.len_of(cn);
            let lcf = b.len_of(cf);
            tx.push("cm", lcm, Content::Coded { class: cm });
            tx.push("cn[k-1]", lcn, plain(cn, -1));
            tx.push("cf", lcf, plain(cf, 0));
            tx.push("l1", b.units(a.pad("l1"), "l1")?, Content::Zero);
            tx.push("p1", b.len_of(p1), plain(p1, 0));
            tx.push("cn", lcn, plain(cn, 0));
            tx.push("p2", b.len_of(p2), plain(p2, 0));
            let l2 = b.units(a.pad("l2"), "l2")?;
            let l3 = b.units(a.pad("l3"), "l3")?;
            let l4 = b.units(a.pad("l4"), "l4")?;
            relay.put(
                "cf1",
                l2,
                l4,
                Content::RelaySum {
                    content: Box::new(plain(cf, 0)),
                    offset: 0,
                },
            );
            relay.put(
                "cf2",
                l2 + l4 + l3,
                lcf - l4,
                Content::RelaySum {
                    content: Box::new(plain(cf, 0)),
                    offset: l4,
                },
            );
            let mut cn_layer = Placed::new(q, nr);
            cn_layer.aligned("cn", lcm, lcn, plain(cn, 0), nc)?;
            extra_layers.push(cn_layer.finish("relay CN layer")?);
        }
        SchemeId::WI3a | SchemeId::WI3b => {
            let cm1 = b.class(a, "cm1", ClassKind::Coded, false)?;
            let cm2 = b.class(a, "cm2", ClassKind::Plain, false)?;
            let cn1 = b.class(a, "cn1", ClassKind::Plain, true)?;
            let cn2 = b.class(a, "cn2", ClassKind::Plain, true)?;
            let cn3 = b.class(a, "cn3", ClassKind::Plain, true)?;
            let p1 = b.class(a, "p1", ClassKind::Plain, false)?;
            let p2 = b.class(a, "p2", ClassKind::Plain, false)?;
            common_gap = nd - nc;
            let (l1, l2, l3) = (b.len_of(cn1), b.len_of(cn2), b.len_of(cn3));
            tx.push("cm1", b.len_of(cm1), Content::Coded { class: cm1 });
            tx.push("cm2", b.len_of(cm2), plain(cm2, 0));
            let pos_cn1 = tx.pos;
            tx.push("cn1[k-1]", l1, plain(cn1, -1));
            let pos_cn2 = tx.pos;
            tx.push("cn2[k-1]", l2, plain(cn2, -1));
            tx.push("p1", b.len_of(p1), plain(p1, 0));
            tx.push("l1u", b.units(a.pad("l1u"), "l1u")?, Content::Zero);
            tx.push("cn1", l1, plain(cn1, 0));
            tx.push("l1d", b.units(a.pad("l1d"), "l1d")?, Content::Zero);
            let pos_cn3 = tx.pos;
            tx.push("cn3[k-1]", l3, plain(cn3, -1));
            tx.push("p2", b.len_of(p2), plain(p2, 0));
            tx.push("cn2", l2, plain(cn2, 0));
            tx.push("cn3", l3, plain(cn3, 0));
            relay.aligned("cn1", pos_cn1, l1, plain(cn1, 0), nc)?;
            relay.aligned("cn2", pos_cn2, l2, plain(cn2, 0), nc)?;
            relay.aligned("cn3", pos_cn3, l3, plain(cn3, 0), nc)?;
        }
        SchemeId::SI => {
            let cm1 = b.class(a, "cm1", ClassKind::Coded, false)?;
            let cm2 = b.class(a, "cm2", ClassKind::Plain, false)?;
            let cf1 = b.class(a, "cf1", ClassKind::Plain, false)?;
            let cf2 = b.class(a, "cf2", ClassKind::Plain, false)?;
            let df1 = b.class(a, "df1", ClassKind::Df, false)?;
            let df2 = b.class(a, "df2", ClassKind::Df, false)?;
            let cn1 = b.class(a, "cn1", ClassKind::Plain, true)?;
            let cn2 = b.class(a, "cn2", ClassKind::Plain, true)?;
            common_gap = nc - nd;
            let (lcn1, lcn2) = (b.len_of(cn1), b.len_of(cn2));
            tx.push("cm1", b.len_of(cm1), Content::Coded { class: cm1 });
            tx.push("cm2", b.len_of(cm2), plain(cm2, 0));
            tx.push("cf1", b.len_of(cf1), plain(cf1, 0));
            tx.push("l1", b.units(a.pad("l1"), "l1")?, Content::Zero);
            tx.push("cf2", b.len_of(cf2), plain(cf2, 0));
            let pos_cn = tx.pos;
            tx.push(
                "cn1[k-1]+df1",
                lcn1,
                Content::Xor(Box::new(plain(cn1, -1)), Box::new(Content::Df { class: df1 })),
            );
            tx.push("cn2[k-1]", lcn2, plain(cn2, -1));
            tx.push("df2", b.len_of(df2), Content::Df { class: df2 });
            let cn = Content::Concat(vec![(lcn1, plain(cn1, 0)), (lcn2, plain(cn2, 0))]);
            tx.push("cn", lcn1 + lcn2, cn.clone());
            let mut top = b.units(a.pad("l2"), "l2")?;
            for (label, c) in [
                ("df1", Content::Df { class: df1 }),
                ("df2", Content::Df { class: df2 }),
                ("cf1", plain(cf1, 0)),
                ("cf2", plain(cf2, 0)),
            ] {
                let len = match &c {
                    Content::Plain { class, .. } | Content::Df { class } => b.len_of(*class),
                    _ => 0,
                };
                relay.put(label, top, len, sum_of(c));
                top += len;
            }
            relay.aligned("cn", pos_cn, lcn1 + lcn2, cn, nc)?;
        }
    }
    let tx = tx.finish(q, "transmit vector")?;
    let mut layers = vec![relay.finish("relay vector")?];
    layers.extend(extra_layers);
    Ok(Layouts {
        scheme: a.scheme,
        scale,
        params: sp,
        q,
        classes: b.classes,
        tx,
        tx_active,
        relay: layers,
        common_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::allocate;

    fn lens(l: &Layer) -> Vec<(String, usize)> {
        l.segments.iter().map(|s| (s.label.clone(), s.len)).collect()
    }

    #[test]
    fn ii_layout() {
        let p = LdParams::new(3, 3, 5, 4);
        let a = allocate(SchemeId::II, &p).unwrap();
        let l = build_layouts(SchemeId::II, &p, &a).unwrap();
        assert_eq!(lens(&l.tx), vec![("cm".into(), 3), ("df".into(), 1), ("zeros".into(), 1)]);
        assert_eq!(lens(&l.relay[0]), vec![("df".into(), 1)]);
    }

    #[test]
    fn wi1_layout() {
        let p = LdParams::new(3, 1, 2, 5);
        let a = allocate(SchemeId::WI1, &p).unwrap();
        let l = build_layouts(SchemeId::WI1, &p, &a).unwrap();
        let got: Vec<usize> = l.tx.segments.iter().map(|s| s.len).collect();
        assert_eq!(got, vec![0, 0, 1, 0, 2, 1, 0, 1]);
        assert_eq!(l.tx.total_len(), 5);
    }
}
