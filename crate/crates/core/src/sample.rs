// SPDX-License-Identifier: Apache-2.0

//! A small ready-made profile: one two-segment pipe between two manholes,
//! both ground lines, a chain dimension and two notes.

use crate::editops::{
    add_object, DimensionDraft, EditError, LeaderDraft, NewObject, PipeDraft, SurfaceDraft, TextDraft, WellDraft,
};
use crate::model::{AxisRef, LeaderTarget, NaturalPoint, ObjectId, PipeType, Profile, SpecProps, SurfaceRole};

fn created(p: &mut Profile, o: NewObject) -> Result<ObjectId, EditError> {
    let r = add_object(p, o)?;
    Ok(r.created.iter().next().and_then(|c| c.id()).expect("add creates one object"))
}

fn pts(v: &[(f64, f64)]) -> Vec<NaturalPoint> {
    v.iter().map(|&(x, y)| NaturalPoint::new(x, y)).collect()
}

fn build() -> Result<Profile, EditError> {
    let mut p = Profile::new();
    let natural = pts(&[(0.0, 99500.0), (20000.0, 99800.0), (40000.0, 99600.0)]);
    let project = pts(&[(0.0, 99700.0), (40000.0, 99900.0)]);
    add_object(&mut p, NewObject::Surface(SurfaceDraft { role: SurfaceRole::Natural, points: natural, color: None }))?;
    add_object(&mut p, NewObject::Surface(SurfaceDraft { role: SurfaceRole::Project, points: project, color: None }))?;

    let t = created(
        &mut p,
        NewObject::PipeType(PipeType {
            outer_diameter: 325.0,
            name: "Труба 325x8 ГОСТ 10704-76".into(),
            material: "Сталь".into(),
            insulation: String::new(),
            spec: SpecProps { position: Some("1".into()), unit_mass: Some(62.54), ..Default::default() },
        }),
    )?;
    let axis = pts(&[(0.0, 97000.0), (25000.0, 96750.0), (40000.0, 96675.0)]);
    created(&mut p, NewObject::Pipe(PipeDraft { type_ref: Some(t), color: None, axis }))?;

    let w1 = created(&mut p, NewObject::Well(WellDraft { axis_x: 0.0, ..Default::default() }))?;
    let w2 = created(&mut p, NewObject::Well(WellDraft { axis_x: 15000.0, ..Default::default() }))?;
    created(
        &mut p,
        NewObject::Dimension(DimensionDraft {
            refs: vec![AxisRef::Well(w1), AxisRef::Well(w2)],
            dim_line_offset: None,
            text_offsets: None,
        }),
    )?;

    let note = created(
        &mut p,
        NewObject::Text(TextDraft {
            lines: vec!["К1-1".into(), "%%c325".into()],
            origin: NaturalPoint::new(3000.0, 101500.0),
            ..Default::default()
        }),
    )?;
    created(&mut p, NewObject::Leader(LeaderDraft { text: note, target: LeaderTarget::Well(w1), offset: None }))?;
    created(
        &mut p,
        NewObject::Text(TextDraft {
            lines: vec!["Грунт: суглинок".into()],
            origin: NaturalPoint::new(30000.0, 101500.0),
            ..Default::default()
        }),
    )?;
    Ok(p)
}

/// The sample profile. It is built through the regular edit operations, so
/// it is valid by construction.
pub fn sample_profile() -> Profile {
    build().expect("sample profile is valid")
}
