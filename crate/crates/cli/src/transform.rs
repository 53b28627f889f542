//! `influence transform`: one interval in the original and the new frame.

use influence_core::{quantify_interval, transform_interval, FrameRelation};

use crate::args::TransformArgs;
use crate::{CmdResult, Failure, EXIT_OK};

pub const HEADER: &str = "frame,dp,dq,dt,dx,ds2";

pub fn run(args: TransformArgs) -> CmdResult {
    let (dp, dq) = match (args.dt, args.dx, args.dp, args.dq) {
        (Some(dt), Some(dx), None, None) => (dt + dx, dt - dx),
        (None, None, Some(dp), Some(dq)) => (dp, dq),
        _ => return Err(Failure::usage("give either --dt and --dx, or --dp and --dq")),
    };
    // a boost by v is the step ratio of a frame moving at -v
    let rel = match (args.v, args.k, args.m, args.n) {
        (Some(v), None, None, None) => FrameRelation::from_velocity(-v),
        (None, Some(k), None, None) => FrameRelation::from_k(k),
        (None, None, Some(m), Some(n)) => FrameRelation::new(m, n),
        _ => return Err(Failure::usage("give one of --v, --k, or --m and --n")),
    }
    .map_err(Failure::from_args)?;
    let (dp2, dq2) = transform_interval(&rel, dp, dq);
    println!("{HEADER}");
    for (name, p, q) in [("original", dp, dq), ("transformed", dp2, dq2)] {
        let iq = quantify_interval(p, q);
        println!("{name},{p},{q},{},{},{}", iq.dt, iq.dx, iq.ds2);
    }
    Ok(EXIT_OK)
}
