use rayon::prelude::*;

use super::{Axis, BaseCommand, CommonArgs, DragArgs, DragRoute, KinematicsArgs, KinematicsRoute, SweepArgs};
use crate::error::{QwError, Result};
use crate::kinematics::{
    classical_position, iterative_accel_position, solve_second_order_constant_accel, uniform_accel_position,
    KinematicState,
};
use crate::params::{DeformationParams, TruncationPolicy};
use crate::resist::{
    classical_drag_velocity, drag_velocity_iterative, gravity_drag_velocity, gravity_drag_velocity_iterative,
    gravity_drag_velocity_series, kappa, DragParams, DEFAULT_DRAG_STEPS, DEFAULT_GRAVITY_DRAG_STEPS,
};
use crate::table::{linspace, Cell, TrajectoryTable};

fn sorted_routes<R: Ord + Copy>(requested: &[R], classical: R) -> Vec<R> {
    let mut routes = requested.to_vec();
    routes.push(classical);
    routes.sort();
    routes.dedup();
    routes
}

fn route_name<R: clap::ValueEnum>(r: &R) -> String {
    r.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn common_meta(table: &mut TrajectoryTable, params: &DeformationParams) {
    table.push_meta("q", format!("{:?}", params.q()));
    table.push_meta("w", format!("{:?}", params.w()));
    table.push_meta("w0", format!("{:?}", params.w0()));
}

fn trailing_meta(table: &mut TrajectoryTable, common: &CommonArgs, policy: &TruncationPolicy) {
    table.push_meta("t_start", format!("{:?}", common.t_start));
    table.push_meta("t_end", format!("{:?}", common.t_end));
    table.push_meta("samples", common.samples);
    table.push_meta("tol", format!("{:?}", policy.tol()));
    table.push_meta("max_terms", policy.max_terms());
}

/// Position table for uniformly accelerated motion.
pub fn kinematics_table(args: &KinematicsArgs) -> Result<TrajectoryTable> {
    let common = &args.common;
    let params = common.params()?;
    let policy = common.policy()?;
    let times = common.times()?;
    for (name, v) in [("x0", args.x0), ("v0", args.v0), ("a", args.a)] {
        if !v.is_finite() {
            return Err(QwError::InvalidParams(format!("--{name} must be finite")));
        }
    }
    let state = KinematicState::new(args.x0, args.v0, args.a);
    let routes = sorted_routes(&args.routes, KinematicsRoute::Classical);

    let mut columns = vec!["t".to_string()];
    columns.extend(routes.iter().map(route_name));
    let mut table = TrajectoryTable::new(columns, 1);
    table.push_meta("command", "kinematics");
    common_meta(&mut table, &params);
    table.push_meta("x0", format!("{:?}", args.x0));
    table.push_meta("v0", format!("{:?}", args.v0));
    table.push_meta("a", format!("{:?}", args.a));
    trailing_meta(&mut table, common, &policy);

    for t in times {
        let mut row = vec![Cell::from(t)];
        for route in &routes {
            row.push(match route {
                KinematicsRoute::Closed => uniform_accel_position(&state, t, &params).into(),
                KinematicsRoute::Iterative => {
                    iterative_accel_position(&state, t, &params, &policy).map(|r| r.value).into()
                }
                KinematicsRoute::SecondOrder => solve_second_order_constant_accel(&state, t, &params, &policy).into(),
                KinematicsRoute::Classical => classical_position(&state, t).into(),
            });
        }
        table.push_row(row);
    }
    Ok(table)
}

/// Velocity table for vertical motion against a drag.
pub fn drag_table(args: &DragArgs) -> Result<TrajectoryTable> {
    let common = &args.common;
    let params = common.params()?;
    let policy = common.policy()?;
    let times = common.times()?;
    if !args.v0.is_finite() || !args.g.is_finite() {
        return Err(QwError::InvalidParams("--v0 and --g must be finite".into()));
    }
    let dp = DragParams::new(args.m, args.k, args.g, args.v0)?;
    let steps = args.iter_n.unwrap_or(if args.g == 0.0 { DEFAULT_DRAG_STEPS } else { DEFAULT_GRAVITY_DRAG_STEPS });
    let routes = sorted_routes(&args.routes, DragRoute::Classical);

    let mut columns = vec!["t".to_string()];
    columns.extend(routes.iter().map(route_name));
    let mut table = TrajectoryTable::new(columns, 1);
    table.push_meta("command", "drag");
    common_meta(&mut table, &params);
    table.push_meta("m", format!("{:?}", args.m));
    table.push_meta("k", format!("{:?}", args.k));
    table.push_meta("g", format!("{:?}", args.g));
    table.push_meta("v0", format!("{:?}", args.v0));
    table.push_meta("kappa", format!("{:?}", kappa(&dp, params.q())));
    table.push_meta("iter_n", steps);
    trailing_meta(&mut table, common, &policy);

    for t in times {
        let mut row = vec![Cell::from(t)];
        for route in &routes {
            row.push(match route {
                DragRoute::Closed => gravity_drag_velocity(&dp, t, &params, &policy).into(),
                DragRoute::Series => gravity_drag_velocity_series(&dp, t, &params, &policy).into(),
                DragRoute::Iterative if args.g == 0.0 => drag_velocity_iterative(&dp, t, &params, steps).into(),
                DragRoute::Iterative => gravity_drag_velocity_iterative(&dp, t, &params, steps).into(),
                DragRoute::Classical => classical_drag_velocity(&dp, t).into(),
            });
        }
        table.push_row(row);
    }
    Ok(table)
}

/// Long-format table of a base command over the (q, w) grid, q-major.
///
/// An axis without a `--sweep` keeps the base command's value.
pub fn sweep_table(args: &SweepArgs) -> Result<TrajectoryTable> {
    let base = args.base.common();
    let mut q_axis = None;
    let mut w_axis = None;
    for ax in &args.axes {
        let slot = match ax.axis {
            Axis::Q => &mut q_axis,
            Axis::W => &mut w_axis,
        };
        if slot.replace(ax).is_some() {
            return Err(QwError::InvalidParams("each sweep axis may be given once".into()));
        }
    }
    let qs = q_axis.map_or(vec![base.q], |ax| linspace(ax.start, ax.end, ax.count));
    let ws = w_axis.map_or(vec![base.w], |ax| linspace(ax.start, ax.end, ax.count));
    let grid: Vec<(f64, f64)> = qs.iter().flat_map(|&q| ws.iter().map(move |&w| (q, w))).collect();
    for &(q, w) in &grid {
        DeformationParams::new(q, w)?;
    }

    let tables: Vec<Result<TrajectoryTable>> = grid
        .par_iter()
        .map(|&(q, w)| match &args.base {
            BaseCommand::Kinematics(a) => {
                let mut a = a.clone();
                (a.common.q, a.common.w) = (q, w);
                kinematics_table(&a)
            }
            BaseCommand::Drag(a) => {
                let mut a = a.clone();
                (a.common.q, a.common.w) = (q, w);
                drag_table(&a)
            }
        })
        .collect();
    let tables = tables.into_iter().collect::<Result<Vec<_>>>()?;

    let first = &tables[0];
    let mut columns = vec!["q".to_string(), "w".to_string()];
    columns.extend(first.columns().iter().cloned());
    let mut table = TrajectoryTable::new(columns, 3);
    table.push_meta("command", "sweep");
    for (key, value) in first.metadata() {
        match key.as_str() {
            "command" => table.push_meta("base", value),
            "q" => table.push_meta("q", q_axis.map_or(value.clone(), |ax| format!("{ax}"))),
            "w" => table.push_meta("w", w_axis.map_or(value.clone(), |ax| format!("{ax}"))),
            "w0" | "kappa" => {}
            _ => table.push_meta(key, value),
        }
    }
    for (&(q, w), sub) in grid.iter().zip(&tables) {
        for row in sub.rows() {
            let mut cells = vec![Cell::Value(q), Cell::Value(w)];
            cells.extend(row.iter().copied());
            table.push_row(cells);
        }
    }
    Ok(table)
}
