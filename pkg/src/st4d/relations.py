"""Spatiotemporal relation solvers over scene metadata.

Six quantities are computed between two frames i and j of a scene:

  * camera absolute distance    -- L2 norm of the camera-center displacement;
  * camera relative direction   -- dominant camera-local axis of the camera's
                                   own translation, seen from frame i;
  * object absolute distance    -- L2 norm of the object-centroid displacement;
  * object-camera absolute distance -- min distance from the camera center at
                                   frame i to any object point at frame j;
  * object-camera relative distance -- change of the same-frame min distance,
                                   thresholded into closer/farther/not moving;
  * object-camera relative direction -- lateral (x) and longitudinal (z)
                                   centroid shift in the frame-i camera frame.

Camera-local axes: +X right, +Y down, +Z forward.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .scene import MissingObjectError, SceneMetadata, camera_center

DEFAULT_TAU = 0.1         # meters; closer/farther/left/right decision threshold
DEFAULT_MIN_MOTION = 0.05  # meters; below this a direction is classified "none"

# Tie margin for the dominant-axis pick; ties resolve with priority Z > X > Y.
_TIE_EPS = 1e-9


class DirectionLabel(str, enum.Enum):
    RIGHT = "right"
    LEFT = "left"
    DOWN = "down"
    UP = "up"
    FORWARD = "forward"
    BACKWARD = "backward"
    NONE = "none"


class RelativeMotionLabel(str, enum.Enum):
    CLOSER = "closer"
    FARTHER = "farther"
    NOT_MOVING = "not moving"


class LateralLabel(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    NONE = "none"


class LongitudinalLabel(str, enum.Enum):
    CLOSER = "closer"
    FARTHER = "farther"
    NONE = "none"


@dataclass
class LateralLongitudinal:
    """Classified x/z centroid shift in the frame-i camera frame, in meters."""

    lateral: LateralLabel
    longitudinal: LongitudinalLabel
    dx: float
    dz: float


_POSITIVE_AXIS = {0: DirectionLabel.RIGHT, 1: DirectionLabel.DOWN, 2: DirectionLabel.FORWARD}
_NEGATIVE_AXIS = {0: DirectionLabel.LEFT, 1: DirectionLabel.UP, 2: DirectionLabel.BACKWARD}


def _check_frame(scene: SceneMetadata, frame: int):
    if frame < 0 or frame >= scene.frame_count:
        raise IndexError(f"frame {frame} out of range [0, {scene.frame_count})")


def _object_points(scene: SceneMetadata, m: int, frame: int) -> np.ndarray:
    _check_frame(scene, frame)
    track = scene.objects[m]
    pts = track.points_per_frame[frame]
    if pts is None or len(pts) == 0:
        raise MissingObjectError(f"object {track.object_id!r} absent at frame {frame}")
    return pts


def _dominant_axis(d: np.ndarray) -> int:
    best = 2
    for axis in (0, 1):
        if abs(d[axis]) > abs(d[best]) + _TIE_EPS:
            best = axis
    return best


def camera_absolute_distance(scene: SceneMetadata, i: int, j: int) -> float:
    """Distance in meters between the camera centers at frames i and j."""
    _check_frame(scene, i)
    _check_frame(scene, j)
    ci = camera_center(scene.cameras[i])
    cj = camera_center(scene.cameras[j])
    return float(np.linalg.norm(cj - ci))


def camera_relative_direction(
    scene: SceneMetadata,
    i: int,
    j: int,
    min_motion: float = DEFAULT_MIN_MOTION,
    mode: str = "translation",
) -> tuple[DirectionLabel, np.ndarray]:
    """Dominant camera-local direction of the camera's motion from frame i to j.

    Two modes:
      * "translation" (default): project the raw extrinsic translation delta,
        d = R_i.T @ (t_j - t_i). Note that with world-to-camera extrinsics
        this is NOT the displacement of the optical centers (for equal
        rotations it is its negation), and it co-rotates with the world frame.
      * "center": d = R_i @ (center_j - center_i), the optical-center
        displacement expressed in the frame-i camera frame; invariant under
        rigid re-expressions of the world.

    Returns (label, d); the label is "none" when ||d|| <= min_motion.
    """
    _check_frame(scene, i)
    _check_frame(scene, j)
    pose_i, pose_j = scene.cameras[i], scene.cameras[j]
    if mode == "translation":
        d = pose_i.R.T @ (pose_j.t - pose_i.t)
    elif mode == "center":
        d = pose_i.R @ (camera_center(pose_j) - camera_center(pose_i))
    else:
        raise ValueError(f"unknown direction mode {mode!r}")
    if float(np.linalg.norm(d)) <= min_motion:
        return DirectionLabel.NONE, d
    axis = _dominant_axis(d)
    label = _POSITIVE_AXIS[axis] if d[axis] > 0 else _NEGATIVE_AXIS[axis]
    return label, d


def object_absolute_distance(scene: SceneMetadata, m: int, i: int, j: int) -> float:
    """Distance in meters between the object's centroids at frames i and j."""
    pi = _object_points(scene, m, i).mean(axis=0)
    pj = _object_points(scene, m, j).mean(axis=0)
    return float(np.linalg.norm(pj - pi))


def object_camera_absolute_distance(
    scene: SceneMetadata, m: int, cam_frame: int, obj_frame: int
) -> float:
    """Min distance from the camera center at ``cam_frame`` to the object's
    points at ``obj_frame``."""
    _check_frame(scene, cam_frame)
    pts = _object_points(scene, m, obj_frame)
    center = camera_center(scene.cameras[cam_frame])
    return float(np.min(np.linalg.norm(pts - center, axis=1)))


def object_camera_relative_distance(
    scene: SceneMetadata, m: int, i: int, j: int, tau: float = DEFAULT_TAU
) -> tuple[RelativeMotionLabel, float]:
    """Change of the same-frame camera-object min distance between i and j.

    d_t pairs the camera and the object at the same frame t; the return is
    (label, d_j - d_i) with label farther if the delta exceeds +tau, closer
    below -tau, otherwise not moving.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    d_i = object_camera_absolute_distance(scene, m, i, i)
    d_j = object_camera_absolute_distance(scene, m, j, j)
    delta = d_j - d_i
    if delta > tau:
        return RelativeMotionLabel.FARTHER, delta
    if delta < -tau:
        return RelativeMotionLabel.CLOSER, delta
    return RelativeMotionLabel.NOT_MOVING, delta


def object_camera_relative_direction(
    scene: SceneMetadata, m: int, i: int, j: int, tau: float = DEFAULT_TAU
) -> LateralLongitudinal:
    """Lateral/longitudinal shift of the object centroid in the frame-i camera.

    The object's points at both frames are mapped into the frame-i camera
    frame (p -> R_i p + t_i) before taking centroids, so the classification
    is relative to where the camera stood at the start.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    _check_frame(scene, i)
    pose_i = scene.cameras[i]
    local_i = (_object_points(scene, m, i) @ pose_i.R.T + pose_i.t).mean(axis=0)
    local_j = (_object_points(scene, m, j) @ pose_i.R.T + pose_i.t).mean(axis=0)
    dx = float(local_j[0] - local_i[0])
    dz = float(local_j[2] - local_i[2])

    if dx > tau:
        lateral = LateralLabel.RIGHT
    elif dx < -tau:
        lateral = LateralLabel.LEFT
    else:
        lateral = LateralLabel.NONE

    if dz > tau:
        longitudinal = LongitudinalLabel.FARTHER
    elif dz < -tau:
        longitudinal = LongitudinalLabel.CLOSER
    else:
        longitudinal = LongitudinalLabel.NONE

    return LateralLongitudinal(lateral, longitudinal, dx, dz)
