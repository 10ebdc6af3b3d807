"""Parametric synthetic scenes with closed-form spatiotemporal ground truth.

Three generators cover the solver surface:

  * dolly  -- camera translating along +Z at constant speed, identity rotation,
              one static box-shaped object;
  * linear -- static camera at the origin, one rigid box translating at
              constant velocity;
  * orbit  -- camera circling a static object at constant radius, always
              facing it (non-identity rotations).

Each generator returns an OracleScene: the scene plus a truths table mapping
(task, i, j, object_id) to the expected distance or label, derived from the
motion model rather than from the solver code. Truth labels are computed with
the same tau / min_motion the scene records, so a test harness can replay them
against the solvers with matching parameters. Optional additive point jitter
(off by default) perturbs only the stored point sets; truths always describe
the noiseless motion model.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .qa import TaskKind
from .relations import DEFAULT_MIN_MOTION, DEFAULT_TAU
from .scene import CameraPose, ObjectTrack, SceneMetadata

# Unit cube corner signs, reused for every box-shaped object.
_BOX_SIGNS = np.array(list(itertools.product((-1.0, 1.0), repeat=3)))


@dataclass
class OracleScene:
    """A synthetic scene bundled with its closed-form expected values."""

    scene: SceneMetadata
    truths: dict = field(default_factory=dict)  # (TaskKind, i, j, object_id|None) -> float | str
    tau: float = DEFAULT_TAU
    min_motion: float = DEFAULT_MIN_MOTION


def _box_points(center: np.ndarray, half_extent: float) -> np.ndarray:
    return center + half_extent * _BOX_SIGNS


def _maybe_jitter(points_per_frame, jitter_std: float, seed: int):
    if jitter_std <= 0:
        return points_per_frame
    rng = np.random.default_rng(seed)
    return [pts + rng.normal(0.0, jitter_std, pts.shape) for pts in points_per_frame]


def _classify_rel_dis(delta: float, tau: float) -> str:
    if delta > tau:
        return "farther"
    if delta < -tau:
        return "closer"
    return "not moving"


def _classify_lateral(dx: float, tau: float) -> str:
    if dx > tau:
        return "right"
    if dx < -tau:
        return "left"
    return "none"


def _classify_longitudinal(dz: float, tau: float) -> str:
    if dz > tau:
        return "farther"
    if dz < -tau:
        return "closer"
    return "none"


def make_dolly_scene(
    frames: int,
    speed: float,
    object_offset,
    box_half: float = 0.2,
    tau: float = DEFAULT_TAU,
    min_motion: float = DEFAULT_MIN_MOTION,
    jitter_std: float = 0.0,
    jitter_seed: int = 0,
) -> OracleScene:
    """Camera advancing along world +Z at ``speed`` m/frame; static box object.

    Camera centers are c_k = (0, 0, speed*k) with identity rotation, hence
    extrinsic translations t_k = -c_k. With the world-to-camera convention the
    raw translation delta equals the negated center displacement, so the
    translation-mode camera direction truth for a forward dolly is "backward".
    """
    if frames < 2:
        raise ValueError("frames must be >= 2")
    if speed < 0:
        raise ValueError("speed must be >= 0")
    offset = np.asarray(object_offset, dtype=float).reshape(3)

    centers = [np.array([0.0, 0.0, speed * k]) for k in range(frames)]
    cameras = [CameraPose(np.eye(3), -c) for c in centers]
    box = _box_points(offset, box_half)
    points = _maybe_jitter([box.copy() for _ in range(frames)], jitter_std, jitter_seed)
    obj = ObjectTrack("box0", "the stationary crate", points)
    scene = SceneMetadata(
        f"dolly-K{frames}-v{speed:g}", frames, cameras, [obj]
    )

    truths = {}
    oid = obj.object_id
    for i, j in itertools.combinations(range(frames), 2):
        span = speed * (j - i)
        truths[(TaskKind.CAM_ABS_DIS, i, j, None)] = span
        if span <= min_motion:
            truths[(TaskKind.CAM_REL_DIR, i, j, None)] = "none"
        else:
            truths[(TaskKind.CAM_REL_DIR, i, j, None)] = "backward"
        truths[(TaskKind.OBJ_ABS_DIS, i, j, oid)] = 0.0

        # Camera center at i against the static box at j (identical at all frames).
        d_cam_i = float(np.min(np.linalg.norm(box - centers[i], axis=1)))
        d_cam_j = float(np.min(np.linalg.norm(box - centers[j], axis=1)))
        truths[(TaskKind.OBJCAM_ABS_DIS, i, j, oid)] = d_cam_i
        delta = d_cam_j - d_cam_i
        truths[(TaskKind.OBJCAM_REL_DIS, i, j, oid)] = _classify_rel_dis(delta, tau)
        # Static object seen from a single reference pose: no apparent shift.
        truths[(TaskKind.OBJCAM_REL_DIR_LATERAL, i, j, oid)] = "none"
        truths[(TaskKind.OBJCAM_REL_DIR_LONGITUDINAL, i, j, oid)] = "none"

    return OracleScene(scene, truths, tau=tau, min_motion=min_motion)


def make_linear_object_scene(
    frames: int,
    object_velocity,
    object_start=(0.0, 0.0, 6.0),
    box_half: float = 0.2,
    tau: float = DEFAULT_TAU,
    min_motion: float = DEFAULT_MIN_MOTION,
    jitter_std: float = 0.0,
    jitter_seed: int = 0,
) -> OracleScene:
    """Static identity camera at the origin; rigid box moving at constant
    velocity (m/frame). Camera-local axes coincide with world axes."""
    if frames < 2:
        raise ValueError("frames must be >= 2")
    velocity = np.asarray(object_velocity, dtype=float).reshape(3)
    start = np.asarray(object_start, dtype=float).reshape(3)

    cameras = [CameraPose(np.eye(3), np.zeros(3)) for _ in range(frames)]
    boxes = [_box_points(start + velocity * k, box_half) for k in range(frames)]
    points = _maybe_jitter(boxes, jitter_std, jitter_seed)
    obj = ObjectTrack("box0", "the moving cart", points)
    scene = SceneMetadata(
        f"linear-K{frames}-v{velocity[0]:g},{velocity[1]:g},{velocity[2]:g}",
        frames, cameras, [obj],
    )

    speed = float(np.linalg.norm(velocity))
    truths = {}
    oid = obj.object_id
    for i, j in itertools.combinations(range(frames), 2):
        truths[(TaskKind.CAM_ABS_DIS, i, j, None)] = 0.0
        truths[(TaskKind.CAM_REL_DIR, i, j, None)] = "none"
        truths[(TaskKind.OBJ_ABS_DIS, i, j, oid)] = speed * (j - i)

        d_i = float(np.min(np.linalg.norm(boxes[i], axis=1)))
        d_j = float(np.min(np.linalg.norm(boxes[j], axis=1)))
        truths[(TaskKind.OBJCAM_ABS_DIS, i, j, oid)] = d_j
        truths[(TaskKind.OBJCAM_REL_DIS, i, j, oid)] = _classify_rel_dis(d_j - d_i, tau)

        dx = float(velocity[0]) * (j - i)
        dz = float(velocity[2]) * (j - i)
        truths[(TaskKind.OBJCAM_REL_DIR_LATERAL, i, j, oid)] = _classify_lateral(dx, tau)
        truths[(TaskKind.OBJCAM_REL_DIR_LONGITUDINAL, i, j, oid)] = _classify_longitudinal(dz, tau)

    return OracleScene(scene, truths, tau=tau, min_motion=min_motion)


def make_orbit_scene(
    frames: int,
    radius: float,
    angular_step: float,
    rod_half: float = 0.3,
    tau: float = DEFAULT_TAU,
    min_motion: float = DEFAULT_MIN_MOTION,
    jitter_std: float = 0.0,
    jitter_seed: int = 0,
) -> OracleScene:
    """Camera orbiting a static object in the XZ plane, always facing it.

    The object is an 8-point rod on the orbit axis (the Y axis): every point
    of an axis-aligned rod is equidistant from all positions on the orbit
    circle, which makes the min camera-object distance exactly constant,
    sqrt(radius^2 + y_min^2), and the relative-distance truth "not moving"
    for arbitrary angular steps. The rod's centroid sits at the orbit center
    (distance = radius), so centroid and nearest-point computations stay
    distinguishable. Camera rotations are look-at matrices, exercising
    non-identity R in the local-frame transforms.
    """
    if frames < 2:
        raise ValueError("frames must be >= 2")
    if radius <= 0:
        raise ValueError("radius must be positive")

    cameras = []
    for k in range(frames):
        phi = angular_step * k
        center = radius * np.array([math.sin(phi), 0.0, math.cos(phi)])
        z_axis = -center / np.linalg.norm(center)  # forward: toward the object
        y_axis = np.array([0.0, 1.0, 0.0])         # camera "down"; orbit is in y=0
        x_axis = np.cross(y_axis, z_axis)
        R = np.stack([x_axis, y_axis, z_axis])
        cameras.append(CameraPose(R, -R @ center))

    ys = np.linspace(-rod_half, rod_half, 8)
    rod = np.stack([np.zeros(8), ys, np.zeros(8)], axis=1)
    points = _maybe_jitter([rod.copy() for _ in range(frames)], jitter_std, jitter_seed)
    obj = ObjectTrack("rod0", "the striped pole", points)
    scene = SceneMetadata(
        f"orbit-K{frames}-r{radius:g}-a{angular_step:g}", frames, cameras, [obj]
    )

    min_axis_offset = float(np.min(np.abs(ys)))
    rod_distance = math.sqrt(radius**2 + min_axis_offset**2)

    truths = {}
    oid = obj.object_id
    for i, j in itertools.combinations(range(frames), 2):
        chord = 2.0 * radius * abs(math.sin((j - i) * angular_step / 2.0))
        truths[(TaskKind.CAM_ABS_DIS, i, j, None)] = chord
        truths[(TaskKind.OBJ_ABS_DIS, i, j, oid)] = 0.0
        truths[(TaskKind.OBJCAM_ABS_DIS, i, j, oid)] = rod_distance
        truths[(TaskKind.OBJCAM_REL_DIS, i, j, oid)] = "not moving"
        truths[(TaskKind.OBJCAM_REL_DIR_LATERAL, i, j, oid)] = "none"
        truths[(TaskKind.OBJCAM_REL_DIR_LONGITUDINAL, i, j, oid)] = "none"

    return OracleScene(scene, truths, tau=tau, min_motion=min_motion)


# --- truths sidecar file ------------------------------------------------------


def save_truths(oracle: OracleScene, path):
    """Write the truths table as JSON next to the scene file."""
    entries = [
        {"task": task.value, "i": i, "j": j, "object_id": oid, "value": value}
        for (task, i, j, oid), value in oracle.truths.items()
    ]
    doc = {
        "video_id": oracle.scene.video_id,
        "tau": oracle.tau,
        "min_motion": oracle.min_motion,
        "truths": entries,
    }
    with open(path, "w") as f:
        json.dump(doc, f)
        f.write("\n")


def load_truths(path) -> tuple[dict, float, float]:
    """Read a truths sidecar; returns (truths table, tau, min_motion)."""
    with open(path) as f:
        doc = json.load(f)
    truths = {
        (TaskKind(e["task"]), e["i"], e["j"], e["object_id"]): e["value"]
        for e in doc["truths"]
    }
    return truths, doc["tau"], doc["min_motion"]
