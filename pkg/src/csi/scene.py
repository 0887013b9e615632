"""Object transmission functions T(x, y): analytic shapes, rasters and poses.

Coordinates are Cartesian in units of the beam waist with the beam axis at
the origin. A shape is defined in its own frame; the pose maps object-frame
points to beam-frame points as scale, then rotate, then translate.
"""

from dataclasses import dataclass, field, replace
from math import cos, pi, sin
from typing import Optional, Tuple, Union

import numpy as np

from .pgm import read_pgm, write_pgm


@dataclass(frozen=True)
class SceneTransform:
    rotation: float = 0.0
    translation: Tuple[float, float] = (0.0, 0.0)
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        object.__setattr__(self, "translation", (float(self.translation[0]), float(self.translation[1])))

    def apply(self, x, y):
        c, s = cos(self.rotation), sin(self.rotation)
        x = np.asarray(x, dtype=float) * self.scale
        y = np.asarray(y, dtype=float) * self.scale
        return c * x - s * y + self.translation[0], s * x + c * y + self.translation[1]

    def inverse(self, x, y):
        c, s = cos(self.rotation), sin(self.rotation)
        x = np.asarray(x, dtype=float) - self.translation[0]
        y = np.asarray(y, dtype=float) - self.translation[1]
        return (c * x + s * y) / self.scale, (-s * x + c * y) / self.scale

    def then(self, other):
        """The transform that applies ``self`` first and ``other`` second."""
        tx, ty = other.apply(*self.translation)
        return SceneTransform(self.rotation + other.rotation, (float(tx), float(ty)), self.scale * other.scale)

    @property
    def is_identity(self):
        return self.rotation == 0.0 and self.translation == (0.0, 0.0) and self.scale == 1.0


# -- analytic shapes ---------------------------------------------------------
# ``contains`` works in the object frame and returns a boolean array.


@dataclass(frozen=True)
class Disc:
    radius: float = 1.0

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("disc radius must be >= 0")

    def contains(self, x, y):
        return x * x + y * y < self.radius * self.radius

    @property
    def bounding_radius(self):
        return self.radius


@dataclass(frozen=True)
class Annulus:
    r_in: float = 0.5
    r_out: float = 1.0

    def __post_init__(self):
        if not 0 <= self.r_in < self.r_out:
            raise ValueError("annulus needs 0 <= r_in < r_out")

    def contains(self, x, y):
        r2 = x * x + y * y
        return (r2 >= self.r_in**2) & (r2 < self.r_out**2)

    @property
    def bounding_radius(self):
        return self.r_out


@dataclass(frozen=True)
class Rectangle:
    width: float = 1.0
    height: float = 1.0

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise ValueError("rectangle sides must be >= 0")

    def contains(self, x, y):
        return (np.abs(x) < 0.5 * self.width) & (np.abs(y) < 0.5 * self.height)

    @property
    def bounding_radius(self):
        return float(np.hypot(0.5 * self.width, 0.5 * self.height))


def regular_star_ratio(points):
    """Inner/outer radius ratio of the regular star polygon {points/2}."""
    if points < 5:
        return 0.5
    return cos(2 * pi / points) / cos(pi / points)


@dataclass(frozen=True)
class Star:
    """Star with ``points`` tips; the first tip lies on the +x axis."""

    points: int = 5
    r_outer: float = 0.45
    r_inner: Optional[float] = None

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("star needs at least one point")
        if self.r_inner is None:
            object.__setattr__(self, "r_inner", self.r_outer * regular_star_ratio(self.points))
        if not 0 < self.r_inner < self.r_outer:
            raise ValueError("star needs 0 < r_inner < r_outer")

    def contains(self, x, y):
        sector = 2 * pi / self.points
        phi = np.mod(np.arctan2(y, x), sector)
        phi = np.minimum(phi, sector - phi)
        r = np.hypot(x, y)
        px, py = r * np.cos(phi), r * np.sin(phi)
        # edge from the tip (r_outer, 0) to the inner vertex at angle pi/points
        ax, ay = self.r_outer, 0.0
        bx, by = self.r_inner * cos(pi / self.points), self.r_inner * sin(pi / self.points)
        side = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        origin_side = (bx - ax) * (0.0 - ay) - (by - ay) * (0.0 - ax)
        return side * origin_side > 0

    @property
    def bounding_radius(self):
        return self.r_outer


@dataclass(frozen=True)
class Fan:
    """``bands`` radial spokes; band k is centred on angle 2 pi k / bands."""

    bands: int = 8
    r_in: float = 0.0
    r_out: float = 1.0
    duty: float = 0.5

    def __post_init__(self):
        if self.bands < 1:
            raise ValueError("fan needs at least one band")
        if not 0 <= self.r_in < self.r_out:
            raise ValueError("fan needs 0 <= r_in < r_out")
        if not 0 < self.duty <= 1:
            raise ValueError("duty must lie in (0, 1]")

    def contains(self, x, y):
        sector = 2 * pi / self.bands
        phi = np.mod(np.arctan2(y, x) + 0.5 * sector, sector) - 0.5 * sector
        r2 = x * x + y * y
        return (np.abs(phi) < 0.5 * self.duty * sector) & (r2 >= self.r_in**2) & (r2 < self.r_out**2)

    @property
    def bounding_radius(self):
        return self.r_out


@dataclass(frozen=True)
class Polygon:
    vertices: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        verts = tuple((float(a), float(b)) for a, b in self.vertices)
        if len(verts) < 3:
            raise ValueError("polygon needs at least three vertices")
        object.__setattr__(self, "vertices", verts)

    def contains(self, x, y):
        # even-odd crossing rule
        inside = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        verts = self.vertices
        for (x0, y0), (x1, y1) in zip(verts, verts[1:] + verts[:1]):
            if y0 == y1:
                continue
            crosses = (y0 > y) != (y1 > y)
            x_hit = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            inside ^= crosses & (x < x_hit)
        return inside

    @property
    def bounding_radius(self):
        return max(float(np.hypot(a, b)) for a, b in self.vertices)


@dataclass(frozen=True)
class Uniform:
    """Spatially constant transmission, independent of the opacity convention."""

    value: float = 1.0

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise ValueError("transmission must lie in [0, 1]")


Shape = Union[Disc, Annulus, Rectangle, Star, Fan, Polygon]


@dataclass(frozen=True, eq=False)
class RasterPayload:
    """Integer graymap samples (top row first) placed in the object frame.

    ``pitch`` is the pixel size in waists and ``origin`` the object-frame
    position of the raster centre.
    """

    samples: np.ndarray
    maxval: int = 255
    pitch: float = 0.01
    origin: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.ndim != 2 or 0 in samples.shape:
            raise ValueError("raster must be a non-empty 2-D array")
        if not self.pitch > 0:
            raise ValueError("pixel pitch must be positive")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def height(self):
        return self.samples.shape[0]

    @property
    def width(self):
        return self.samples.shape[1]

    def lookup(self, x, y):
        """Grey level in [0, 1] by nearest pixel; ``nan`` outside the extent."""
        h, w = self.samples.shape
        col = np.floor((x - self.origin[0]) / self.pitch + 0.5 * w).astype(np.int64)
        row = np.floor(0.5 * h - (y - self.origin[1]) / self.pitch).astype(np.int64)
        inside = (col >= 0) & (col < w) & (row >= 0) & (row < h)
        out = np.full(np.shape(inside), np.nan)
        out[inside] = self.samples[row[inside], col[inside]] / self.maxval
        return out

    @property
    def bounding_radius(self):
        half = 0.5 * self.pitch * np.array([self.width, self.height])
        return float(np.hypot(abs(self.origin[0]) + half[0], abs(self.origin[1]) + half[1]))


@dataclass(frozen=True)
class TransmissionMap:
    """Object transmission T in [0, 1] sampled on the beam plane.

    With ``opaque_mask`` set an analytic shape blocks light (T = 0 inside,
    1 outside); cleared, it is an aperture in an opaque screen. Raster grey
    levels are read as transmission under either convention and the plane
    outside the raster is transparent.
    """

    source: Union[Shape, Uniform, RasterPayload]
    opaque_mask: bool = True
    pose: SceneTransform = field(default_factory=SceneTransform)

    def sample(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        src = self.source
        if isinstance(src, Uniform):
            return np.full(np.broadcast(x, y).shape, float(src.value))
        ox, oy = self.pose.inverse(x, y)
        if isinstance(src, RasterPayload):
            g = src.lookup(ox, oy)
            return np.where(np.isnan(g), 1.0, g)
        inside = src.contains(ox, oy)
        if self.opaque_mask:
            return np.where(inside, 0.0, 1.0)
        return np.where(inside, 1.0, 0.0)

    @property
    def background(self):
        """Transmission far from the object."""
        src = self.source
        if isinstance(src, Uniform):
            return float(src.value)
        if isinstance(src, RasterPayload) or self.opaque_mask:
            return 1.0
        return 0.0

    def support(self):
        """Circle ``(cx, cy, radius)`` outside which T equals the background.

        ``None`` means T equals the background everywhere.
        """
        if isinstance(self.source, Uniform):
            return None
        cx, cy = self.pose.translation
        if isinstance(self.source, RasterPayload):
            # the raster extent is not centred on the object-frame origin in general
            ox, oy = self.pose.apply(*self.source.origin)
            half = 0.5 * self.source.pitch * np.hypot(self.source.width, self.source.height)
            return float(ox), float(oy), float(half * self.pose.scale)
        return cx, cy, float(self.source.bounding_radius * self.pose.scale)

    def transformed(self, transform):
        """Apply ``transform`` on top of the current pose."""
        return replace(self, pose=self.pose.then(transform))

    def rotated(self, angle):
        return self.transformed(SceneTransform(rotation=angle))

    def translated(self, dx, dy=0.0):
        return self.transformed(SceneTransform(translation=(dx, dy)))

    def scaled(self, factor):
        return self.transformed(SceneTransform(scale=factor))

    def describe(self):
        src = self.source
        if isinstance(src, RasterPayload):
            text = f"raster({src.width}x{src.height},maxval={src.maxval},pitch={src.pitch!r},origin={src.origin!r})"
        else:
            text = repr(src)
        pose = self.pose
        return (
            f"{text};opaque_mask={self.opaque_mask};rotation={pose.rotation!r};"
            f"translation={pose.translation!r};scale={pose.scale!r}"
        )


_SHAPES = {
    "disc": (Disc, ("radius",)),
    "annulus": (Annulus, ("r_in", "r_out")),
    "rectangle": (Rectangle, ("width", "height")),
    "rect": (Rectangle, ("width", "height")),
    "star": (Star, ("points", "r_outer", "r_inner")),
    "fan": (Fan, ("bands", "r_in", "r_out", "duty")),
    "uniform": (Uniform, ("value",)),
}
_INT_FIELDS = {"points", "bands"}


def parse_shape(descriptor):
    """Parse ``kind:arg,arg,...`` (positional or ``name=value``) into a shape.

    Polygons use ``polygon:x0 y0;x1 y1;...``.
    """
    kind, _, rest = descriptor.strip().partition(":")
    kind = kind.lower()
    if kind == "polygon":
        verts = [tuple(float(v) for v in pair.split()) for pair in rest.split(";") if pair.strip()]
        if any(len(v) != 2 for v in verts):
            raise ValueError(f"bad polygon vertex list: {rest!r}")
        return Polygon(tuple(verts))
    if kind not in _SHAPES:
        raise ValueError(f"unknown shape kind {kind!r}; choose from {sorted(_SHAPES) + ['polygon']}")
    cls, names = _SHAPES[kind]
    kwargs = {}
    args = [a.strip() for a in rest.split(",") if a.strip()] if rest else []
    if len(args) > len(names):
        raise ValueError(f"{kind} takes at most {len(names)} parameters")
    for i, arg in enumerate(args):
        name, eq, value = arg.partition("=")
        if not eq:
            name, value = names[i], arg
        if name not in names:
            raise ValueError(f"{kind} has no parameter {name!r}")
        kwargs[name] = int(value) if name in _INT_FIELDS else float(value)
    return cls(**kwargs)


def make_shape(descriptor, opaque_mask=True, pose=None):
    """Build a :class:`TransmissionMap` from a descriptor string or shape object."""
    source = parse_shape(descriptor) if isinstance(descriptor, str) else descriptor
    return TransmissionMap(source, opaque_mask=opaque_mask, pose=pose or SceneTransform())


def load_raster(data, pitch=0.01, origin=(0.0, 0.0), opaque_mask=True, pose=None):
    """Read PGM bytes into a raster-backed :class:`TransmissionMap`."""
    samples, maxval = read_pgm(data)
    payload = RasterPayload(samples, maxval=maxval, pitch=pitch, origin=tuple(origin))
    return TransmissionMap(payload, opaque_mask=opaque_mask, pose=pose or SceneTransform())


def save_raster(tmap, binary=True):
    """PGM bytes of a raster-backed map (samples written back unchanged)."""
    if not isinstance(tmap.source, RasterPayload):
        raise TypeError("only raster-backed maps can be saved verbatim; use rasterize() for shapes")
    return write_pgm(tmap.source.samples, tmap.source.maxval, binary=binary)


def rasterize(tmap, width, height, pitch, origin=(0.0, 0.0), maxval=255):
    """Sample a map on pixel centres into a :class:`RasterPayload`."""
    cols = origin[0] + (np.arange(width) + 0.5 - 0.5 * width) * pitch
    rows = origin[1] + (0.5 * height - np.arange(height) - 0.5) * pitch
    x, y = np.meshgrid(cols, rows)
    values = np.rint(tmap.sample(x, y) * maxval).astype(np.uint16)
    return RasterPayload(values, maxval=maxval, pitch=pitch, origin=tuple(origin))
