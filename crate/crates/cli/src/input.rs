use std::io::Read;
use std::path::Path;

use brunnel::jsjtree::JsjTree;
use brunnel::surfacecalc::SurfaceLinkDescriptor;
use brunnel::{DtCode, GroupPresentation, LinkDiagram};
use serde_json::Value;

use crate::Failure;

/// `-` reads stdin, an existing file is read, anything else is the text.
pub fn text(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::new(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    let p = Path::new(arg);
    if p.is_file() {
        return std::fs::read_to_string(p).map_err(|e| Failure::new(format!("reading {arg}: {e}")));
    }
    Ok(arg.to_string())
}

fn json(s: &str) -> Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::new(format!("invalid JSON input: {e}")))
}

pub fn dt(arg: &str) -> Result<DtCode, Failure> {
    let s = text(arg)?;
    let t = s.trim();
    if t.starts_with('{') {
        let v = json(t)?;
        if let Some(code) = v.get("dt").and_then(Value::as_str) {
            return Ok(DtCode::parse(code)?);
        }
        return serde_json::from_value(v).map_err(|e| Failure::new(format!("not a DT code: {e}")));
    }
    Ok(DtCode::parse(t)?)
}

/// A DT code (knots only), PD text, or JSON carrying either.
pub fn link(arg: &str) -> Result<LinkDiagram, Failure> {
    let s = text(arg)?;
    link_from_text(s.trim())
}

fn link_from_text(t: &str) -> Result<LinkDiagram, Failure> {
    if t.starts_with("DT:") {
        return Ok(DtCode::parse(t)?.to_diagram()?);
    }
    if t.starts_with("PD[") {
        return Ok(LinkDiagram::from_pd_text(t)?);
    }
    if t.starts_with('{') {
        let v = json(t)?;
        for key in ["pd", "dt"] {
            if let Some(inner) = v.get(key).and_then(Value::as_str) {
                return link_from_text(inner);
            }
        }
        return serde_json::from_value(v).map_err(|e| Failure::new(format!("not a link diagram: {e}")));
    }
    Err(Failure::new("expected a DT code, PD code or JSON diagram"))
}

pub fn presentation(arg: &str) -> Result<GroupPresentation, Failure> {
    let s = text(arg)?;
    let t = s.trim();
    if t.starts_with('<') {
        return t.parse().map_err(|e: brunnel::grouppres::GroupError| Failure::new(e.to_string()));
    }
    if t.starts_with('{') {
        let v = json(t)?;
        if v.get("generator_count").is_some() {
            return serde_json::from_value(v).map_err(|e| Failure::new(format!("not a presentation: {e}")));
        }
    }
    Ok(GroupPresentation::wirtinger(&link_from_text(t)?))
}

pub fn tree(arg: &str) -> Result<JsjTree, Failure> {
    serde_json::from_value(json(text(arg)?.trim())?).map_err(|e| Failure::new(format!("not a JSJ tree: {e}")))
}

/// A descriptor, or the output of `descriptor cover`.
pub fn descriptor(arg: &str) -> Result<SurfaceLinkDescriptor, Failure> {
    let mut v = json(text(arg)?.trim())?;
    if let Some(inner) = v.get_mut("descriptor") {
        v = inner.take();
    }
    serde_json::from_value(v).map_err(|e| Failure::new(format!("not a surface-link descriptor: {e}")))
}
