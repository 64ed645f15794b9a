//! C ABI over the domain-composition library.
//!
//! Objects cross the boundary as opaque handles created and released by
//! paired `*_free` functions; every fallible call returns an [`RcpStatus`]
//! and writes results through out-pointers. Node identity is the dense
//! `u32` index of the owning graph; labels are exchanged as NUL-terminated
//! UTF-8 strings.

use std::ffi::{c_char, CStr};
use std::ptr;

use rcp_core::error::RcpError;
use rcp_core::graph::{load_edge_list, LoadMode, LoadOptions, NodeId, SocialGraph};
use rcp_core::percolation::{compose_backbone, compose_complete_domain};
use rcp_core::policy::RcpPolicy;
use rcp_core::supercore::SupercoreAnalysis;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    IoError = 3,
    ParseError = 4,
    InvalidArgument = 5,
    NotFound = 6,
    OutOfRange = 7,
    BufferTooSmall = 8,
    InternalError = 9,
}

fn status_of(err: &RcpError) -> RcpStatus {
    match err {
        RcpError::Parse { .. } | RcpError::EmptyInput => RcpStatus::ParseError,
        RcpError::Io(_) => RcpStatus::IoError,
        RcpError::UnknownLabel { .. } => RcpStatus::NotFound,
        RcpError::InvariantViolation(_) => RcpStatus::InternalError,
        _ => RcpStatus::InvalidArgument,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn rcp_status_message(status: RcpStatus) -> *const c_char {
    let message: &'static CStr = match status {
        RcpStatus::Ok => c"ok",
        RcpStatus::NullPointer => c"null pointer argument",
        RcpStatus::InvalidUtf8 => c"argument is not valid UTF-8",
        RcpStatus::IoError => c"I/O error",
        RcpStatus::ParseError => c"input could not be parsed",
        RcpStatus::InvalidArgument => c"invalid argument",
        RcpStatus::NotFound => c"not found",
        RcpStatus::OutOfRange => c"index out of range",
        RcpStatus::BufferTooSmall => c"buffer too small",
        RcpStatus::InternalError => c"internal invariant violated",
    };
    message.as_ptr()
}

/// Opaque undirected social graph.
pub struct RcpGraph {
    graph: SocialGraph,
}

/// Opaque immutable list of node indices.
pub struct RcpNodeSet {
    nodes: Vec<u32>,
}

/// Opaque whole-graph pipeline result: the supercore partition with
/// per-supercore backbone and domain sizes.
pub struct RcpSupercores {
    node_to_supercore: Vec<u32>,
    supercore_sizes: Vec<u64>,
    backbone_sizes: Vec<u64>,
    domain_sizes: Vec<u64>,
    dag_edge_count: u64,
}

/// Graph statistics mirroring the `stats` CLI output.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RcpGraphStats {
    pub nodes: u64,
    pub links: u64,
    pub avg_degree: f64,
    pub clustering_coefficient: f64,
}

fn load_options(mode: u32, retain_isolated: u32) -> Option<LoadOptions> {
    let mode = match mode {
        0 => LoadMode::Undirected,
        1 => LoadMode::MutualOnly,
        _ => return None,
    };
    Some(LoadOptions {
        mode,
        retain_isolated: retain_isolated != 0,
        sidecar_nodes: Vec::new(),
    })
}

unsafe fn write_out<T>(out: *mut T, value: T) -> RcpStatus {
    if out.is_null() {
        return RcpStatus::NullPointer;
    }
    unsafe { ptr::write(out, value) };
    RcpStatus::Ok
}

/// Load an edge list from a file path.
///
/// `mode`: 0 undirected, 1 mutual-only. On success writes a graph handle
/// that must be released with [`rcp_graph_free`].
///
/// # Safety
/// `path` must be a valid NUL-terminated string; `out_graph` must be a
/// valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn rcp_graph_load_path(
    path: *const c_char,
    mode: u32,
    retain_isolated: u32,
    out_graph: *mut *mut RcpGraph,
) -> RcpStatus {
    if path.is_null() || out_graph.is_null() {
        return RcpStatus::NullPointer;
    }
    let Ok(path) = unsafe { CStr::from_ptr(path) }.to_str() else {
        return RcpStatus::InvalidUtf8;
    };
    let Some(options) = load_options(mode, retain_isolated) else {
        return RcpStatus::InvalidArgument;
    };
    let file = match std::fs::File::open(path) {
        Ok(file) => file,
        Err(_) => return RcpStatus::IoError,
    };
    match load_edge_list(file, &options) {
        Ok((graph, _)) => unsafe {
            write_out(out_graph, Box::into_raw(Box::new(RcpGraph { graph })))
        },
        Err(err) => status_of(&err),
    }
}

/// Load an edge list from an in-memory buffer.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out_graph` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rcp_graph_load_bytes(
    data: *const u8,
    len: usize,
    mode: u32,
    retain_isolated: u32,
    out_graph: *mut *mut RcpGraph,
) -> RcpStatus {
    if data.is_null() || out_graph.is_null() {
        return RcpStatus::NullPointer;
    }
    let Some(options) = load_options(mode, retain_isolated) else {
        return RcpStatus::InvalidArgument;
    };
    let bytes = unsafe { std::slice::from_raw_parts(data, len) };
    match load_edge_list(bytes, &options) {
        Ok((graph, _)) => unsafe {
            write_out(out_graph, Box::into_raw(Box::new(RcpGraph { graph })))
        },
        Err(err) => status_of(&err),
    }
}

/// Release a graph handle. Null is tolerated.
///
/// # Safety
/// `graph` must be null or a pointer returned by a load function, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn rcp_graph_free(graph: *mut RcpGraph) {
    if !graph.is_null() {
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// # Safety
/// `graph` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_graph_node_count(
    graph: *const RcpGraph,
    out: *mut u64,
) -> RcpStatus {
    let Some(handle) = (unsafe { graph.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    unsafe { write_out(out, handle.graph.node_count() as u64) }
}

/// # Safety
/// `graph` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_graph_edge_count(
    graph: *const RcpGraph,
    out: *mut u64,
) -> RcpStatus {
    let Some(handle) = (unsafe { graph.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    unsafe { write_out(out, handle.graph.edge_count() as u64) }
}

/// Node/link counts, average degree, average local clustering.
///
/// # Safety
/// `graph` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_graph_stats(
    graph: *const RcpGraph,
    out: *mut RcpGraphStats,
) -> RcpStatus {
    let Some(handle) = (unsafe { graph.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    match handle.graph.stats() {
        Ok(stats) => unsafe {
            write_out(
                out,
                RcpGraphStats {
                    nodes: stats.node_count as u64,
                    links: stats.link_count as u64,
                    avg_degree: stats.avg_degree,
                    clustering_coefficient: stats.clustering_coefficient,
                },
            )
        },
        Err(err) => status_of(&err),
    }
}

/// Resolve an external label to its dense node index.
///
/// # Safety
/// `graph` must be a live graph handle; `label` a valid NUL-terminated
/// string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_graph_node_index(
    graph: *const RcpGraph,
    label: *const c_char,
    out: *mut u32,
) -> RcpStatus {
    let Some(handle) = (unsafe { graph.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    if label.is_null() {
        return RcpStatus::NullPointer;
    }
    let Ok(label) = unsafe { CStr::from_ptr(label) }.to_str() else {
        return RcpStatus::InvalidUtf8;
    };
    match handle.graph.node_by_label(label) {
        Some(node) => unsafe { write_out(out, node.0) },
        None => RcpStatus::NotFound,
    }
}

/// Copy a node's label into `buf` (NUL-terminated). `out_len` always
/// receives the required buffer size including the terminator.
///
/// # Safety
/// `graph` must be a live graph handle; `buf` must hold `buf_len` writable
/// bytes; `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_graph_node_label(
    graph: *const RcpGraph,
    node: u32,
    buf: *mut c_char,
    buf_len: usize,
    out_len: *mut usize,
) -> RcpStatus {
    let Some(handle) = (unsafe { graph.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    if !handle.graph.contains(NodeId(node)) {
        return RcpStatus::OutOfRange;
    }
    let label = handle.graph.label(NodeId(node));
    let needed = label.len() + 1;
    if out_len.is_null() {
        return RcpStatus::NullPointer;
    }
    unsafe { ptr::write(out_len, needed) };
    if buf.is_null() || buf_len < needed {
        return RcpStatus::BufferTooSmall;
    }
    unsafe {
        ptr::copy_nonoverlapping(label.as_ptr(), buf as *mut u8, label.len());
        ptr::write(buf.add(label.len()) as *mut u8, 0);
    }
    RcpStatus::Ok
}

/// Number of common neighbors of two distinct nodes.
///
/// # Safety
/// `graph` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_graph_tie_strength(
    graph: *const RcpGraph,
    i: u32,
    j: u32,
    out: *mut u32,
) -> RcpStatus {
    let Some(handle) = (unsafe { graph.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    if !handle.graph.contains(NodeId(i)) || !handle.graph.contains(NodeId(j)) {
        return RcpStatus::OutOfRange;
    }
    match handle.graph.tie_strength(NodeId(i), NodeId(j)) {
        Ok(strength) => unsafe { write_out(out, strength) },
        Err(err) => status_of(&err),
    }
}

fn make_policy(alpha: u32, beta: u32) -> Result<RcpPolicy, RcpStatus> {
    RcpPolicy::new(alpha, beta).map_err(|_| RcpStatus::InvalidArgument)
}

/// Compose the largest policy-compliant backbone for one center.
///
/// # Safety
/// `graph` must be a live graph handle; `out_set` must be writable. The
/// result must be released with [`rcp_node_set_free`].
#[no_mangle]
pub unsafe extern "C" fn rcp_backbone_compose(
    graph: *const RcpGraph,
    alpha: u32,
    beta: u32,
    center: u32,
    out_set: *mut *mut RcpNodeSet,
) -> RcpStatus {
    let Some(handle) = (unsafe { graph.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    let policy = match make_policy(alpha, beta) {
        Ok(policy) => policy,
        Err(status) => return status,
    };
    if !handle.graph.contains(NodeId(center)) {
        return RcpStatus::OutOfRange;
    }
    match compose_backbone(&handle.graph, policy, NodeId(center)) {
        Ok(backbone) => {
            let nodes = backbone.members().iter().map(|n| n.0).collect();
            unsafe { write_out(out_set, Box::into_raw(Box::new(RcpNodeSet { nodes }))) }
        }
        Err(err) => status_of(&err),
    }
}

/// Compose the complete domain (backbone plus friend circles) for one
/// center.
///
/// # Safety
/// As [`rcp_backbone_compose`].
#[no_mangle]
pub unsafe extern "C" fn rcp_domain_compose(
    graph: *const RcpGraph,
    alpha: u32,
    beta: u32,
    center: u32,
    out_set: *mut *mut RcpNodeSet,
) -> RcpStatus {
    let Some(handle) = (unsafe { graph.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    let policy = match make_policy(alpha, beta) {
        Ok(policy) => policy,
        Err(status) => return status,
    };
    if !handle.graph.contains(NodeId(center)) {
        return RcpStatus::OutOfRange;
    }
    let domain = compose_backbone(&handle.graph, policy, NodeId(center))
        .and_then(|backbone| compose_complete_domain(&handle.graph, &backbone));
    match domain {
        Ok(domain) => {
            let nodes = domain.members().iter().map(|n| n.0).collect();
            unsafe { write_out(out_set, Box::into_raw(Box::new(RcpNodeSet { nodes }))) }
        }
        Err(err) => status_of(&err),
    }
}

/// # Safety
/// `set` must be a live node-set handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_node_set_len(set: *const RcpNodeSet, out: *mut u64) -> RcpStatus {
    let Some(set) = (unsafe { set.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    unsafe { write_out(out, set.nodes.len() as u64) }
}

/// # Safety
/// `set` must be a live node-set handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_node_set_get(
    set: *const RcpNodeSet,
    index: u64,
    out: *mut u32,
) -> RcpStatus {
    let Some(set) = (unsafe { set.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    match set.nodes.get(index as usize) {
        Some(&node) => unsafe { write_out(out, node) },
        None => RcpStatus::OutOfRange,
    }
}

/// # Safety
/// `set` must be null or a pointer returned by a compose function, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn rcp_node_set_free(set: *mut RcpNodeSet) {
    if !set.is_null() {
        drop(unsafe { Box::from_raw(set) });
    }
}

/// Run the whole-graph pipeline. The handle owns its data and may outlive
/// the graph.
///
/// # Safety
/// `graph` must be a live graph handle; `out` must be writable. The result
/// must be released with [`rcp_supercores_free`].
#[no_mangle]
pub unsafe extern "C" fn rcp_supercores_compute(
    graph: *const RcpGraph,
    alpha: u32,
    beta: u32,
    out: *mut *mut RcpSupercores,
) -> RcpStatus {
    let Some(handle) = (unsafe { graph.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    let policy = match make_policy(alpha, beta) {
        Ok(policy) => policy,
        Err(status) => return status,
    };
    match SupercoreAnalysis::run(&handle.graph, policy) {
        Ok(analysis) => {
            let result = RcpSupercores {
                node_to_supercore: analysis.dag.node_to_supercore.clone(),
                supercore_sizes: analysis
                    .dag
                    .supercores
                    .iter()
                    .map(|s| s.len() as u64)
                    .collect(),
                backbone_sizes: analysis.backbones.iter().map(|b| b.len() as u64).collect(),
                domain_sizes: analysis.domains.iter().map(|d| d.len() as u64).collect(),
                dag_edge_count: analysis.dag.dag_edges.len() as u64,
            };
            unsafe { write_out(out, Box::into_raw(Box::new(result))) }
        }
        Err(err) => status_of(&err),
    }
}

/// # Safety
/// `sc` must be a live supercores handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_supercores_count(
    sc: *const RcpSupercores,
    out: *mut u64,
) -> RcpStatus {
    let Some(sc) = (unsafe { sc.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    unsafe { write_out(out, sc.supercore_sizes.len() as u64) }
}

/// # Safety
/// `sc` must be a live supercores handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_supercores_dag_edge_count(
    sc: *const RcpSupercores,
    out: *mut u64,
) -> RcpStatus {
    let Some(sc) = (unsafe { sc.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    unsafe { write_out(out, sc.dag_edge_count) }
}

/// Supercore index owning `node`.
///
/// # Safety
/// `sc` must be a live supercores handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_supercores_of_node(
    sc: *const RcpSupercores,
    node: u32,
    out: *mut u32,
) -> RcpStatus {
    let Some(sc) = (unsafe { sc.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    match sc.node_to_supercore.get(node as usize) {
        Some(&supercore) => unsafe { write_out(out, supercore) },
        None => RcpStatus::OutOfRange,
    }
}

/// # Safety
/// `sc` must be a live supercores handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_supercores_size(
    sc: *const RcpSupercores,
    supercore: u32,
    out: *mut u64,
) -> RcpStatus {
    let Some(sc) = (unsafe { sc.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    match sc.supercore_sizes.get(supercore as usize) {
        Some(&size) => unsafe { write_out(out, size) },
        None => RcpStatus::OutOfRange,
    }
}

/// Size of the largest compliant backbone shared by the supercore's nodes.
///
/// # Safety
/// `sc` must be a live supercores handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_supercores_backbone_size(
    sc: *const RcpSupercores,
    supercore: u32,
    out: *mut u64,
) -> RcpStatus {
    let Some(sc) = (unsafe { sc.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    match sc.backbone_sizes.get(supercore as usize) {
        Some(&size) => unsafe { write_out(out, size) },
        None => RcpStatus::OutOfRange,
    }
}

/// Size of the complete domain shared by the supercore's nodes.
///
/// # Safety
/// `sc` must be a live supercores handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rcp_supercores_domain_size(
    sc: *const RcpSupercores,
    supercore: u32,
    out: *mut u64,
) -> RcpStatus {
    let Some(sc) = (unsafe { sc.as_ref() }) else {
        return RcpStatus::NullPointer;
    };
    match sc.domain_sizes.get(supercore as usize) {
        Some(&size) => unsafe { write_out(out, size) },
        None => RcpStatus::OutOfRange,
    }
}

/// # Safety
/// `sc` must be null or a pointer returned by [`rcp_supercores_compute`],
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rcp_supercores_free(sc: *mut RcpSupercores) {
    if !sc.is_null() {
        drop(unsafe { Box::from_raw(sc) });
    }
}
