use serde::Serialize;

use heiscone::curvature::{ricci_and_scalar, CurvatureTensor};
use heiscone::{eval_frame, FrameId, MetricId, Point, Tangent};

use crate::args::{frame_name, parse_frame, parse_metric, CurvatureArgs};
use crate::json::{num, nums, to_string, Num};
use crate::{emit, CmdResult, Failure};

#[derive(Serialize)]
struct Plane {
    plane: [String; 2],
    sectional: Num,
}

#[derive(Serialize)]
struct RicciRow {
    frame: String,
    trace: Num,
    normalized: Num,
}

#[derive(Serialize)]
struct Scalar {
    trace: Num,
    normalized: Num,
}

#[derive(Serialize)]
struct Table {
    metric: String,
    point: Vec<Num>,
    planes: Vec<Plane>,
    ricci: Vec<RicciRow>,
    scalar: Scalar,
}

#[derive(Serialize)]
struct Single {
    metric: String,
    point: Vec<Num>,
    plane: [String; 2],
    sectional: Num,
}

/// The named frame of each metric, or coordinate vectors where it has none.
fn frames(m: &MetricId, p: &Point) -> heiscone::Result<Vec<(String, Tangent)>> {
    let named: &[FrameId] = match m {
        MetricId::Sasaki | MetricId::Approximant { .. } => &[FrameId::X, FrameId::Y, FrameId::TTilde],
        MetricId::Cone => &[FrameId::Xr, FrameId::Yr, FrameId::Tr, FrameId::Dr],
        MetricId::Prime => &[FrameId::XPrime, FrameId::YPrime, FrameId::TPrime, FrameId::RPrime],
        _ => &[],
    };
    if named.is_empty() {
        let names = p.manifold().coord_names();
        return Ok((0..p.dim())
            .map(|k| (format!("d/d{}", names[k]), Tangent::coordinate(*p, k)))
            .collect());
    }
    named
        .iter()
        .map(|&f| Ok((frame_name(f).to_string(), eval_frame(f, p)?)))
        .collect()
}

pub fn run(a: CurvatureArgs) -> CmdResult {
    let cfg = a.run.config()?;
    let m = parse_metric(&a.metric)?;
    let p = Point::with_guard(m.manifold(), &a.point.0, cfg.domain_guard)?;
    let fd = cfg.fd();
    let tensor = CurvatureTensor::at(&m, &p, &fd)?;
    let point = nums(p.coords());

    if let Some(plane) = a.plane {
        let names: Vec<&str> = plane.split(',').collect();
        let [u, v] = names[..] else {
            return Err(Failure::usage(format!("--plane needs two frames, got {plane:?}")));
        };
        let (fu, fv) = (parse_frame(u)?, parse_frame(v)?);
        let k = tensor.sectional(&eval_frame(fu, &p)?, &eval_frame(fv, &p)?)?;
        let out = Single {
            metric: m.name(),
            point,
            plane: [frame_name(fu).into(), frame_name(fv).into()],
            sectional: num(k),
        };
        emit(None, &to_string(&out))?;
        return Ok(0);
    }

    let fr = frames(&m, &p)?;
    let mut planes = Vec::new();
    for i in 0..fr.len() {
        for j in i + 1..fr.len() {
            planes.push(Plane {
                plane: [fr[i].0.clone(), fr[j].0.clone()],
                sectional: num(tensor.sectional(&fr[i].1, &fr[j].1)?),
            });
        }
    }
    let ric = ricci_and_scalar(&m, &p, &fd)?;
    let ricci = fr
        .iter()
        .map(|(name, u)| {
            Ok(RicciRow {
                frame: name.clone(),
                trace: num(ric.in_direction(u)?),
                normalized: num(ric.in_direction_normalized(u)?),
            })
        })
        .collect::<heiscone::Result<Vec<_>>>()?;
    let out = Table {
        metric: m.name(),
        point,
        planes,
        ricci,
        scalar: Scalar {
            trace: num(ric.scalar),
            normalized: num(ric.scalar_normalized()),
        },
    };
    emit(None, &to_string(&out))?;
    Ok(0)
}
