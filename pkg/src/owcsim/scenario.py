"""Room geometry, access-point layout, user placement, and parameter defaults.

All types are frozen dataclasses validated at construction time, so a
Scenario that exists is a Scenario that passed every bound check. Defaults
follow the system-parameter table of the simulated setup; values the setup
leaves open (room footprint, AP count, receiver electronics, LED bandwidth)
carry documented defaults and are all configurable.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .rng import SplitMix64

# Geometry defaults: footprint is a conventional indoor cell; the height is
# fixed by the 3 m ceiling-to-desk link distance plus the 1 m receive plane.
DEFAULT_ROOM_WIDTH = 5.0
DEFAULT_ROOM_DEPTH = 5.0
DEFAULT_ROOM_HEIGHT = 4.0
DEFAULT_PLANE_HEIGHT = 1.0
DEFAULT_N_APS = 8

# Receiver defaults (not part of the published parameter table).
DEFAULT_DETECTOR_AREA = 1e-4  # 1 cm^2
DEFAULT_FOV_HALF_ANGLE = math.radians(60.0)
DEFAULT_RESPONSIVITY_VCSEL = 0.9  # A/W at 1550 nm
DEFAULT_RESPONSIVITY_LED = 0.4  # A/W, visible band
DEFAULT_TEMPERATURE_K = 300.0
DEFAULT_BACKGROUND_CURRENT = 10e-6


class ApKind(enum.Enum):
    VCSEL_ARRAY = "vcsel_array"
    LED_UNIT = "led_unit"


class SystemKind(enum.Enum):
    VCSEL = "vcsel"
    LED = "led"


class RateModel(enum.Enum):
    SHANNON = "shannon"
    OOK_FEC = "ook"


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ConfigError(f"{name} must be finite, got {v!r}")


def _require_positive(name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise ConfigError(f"{name} must be > 0, got {value!r}")


@dataclass(frozen=True)
class Vec3:
    """Cartesian position in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        _require_finite("Vec3 component", self.x, self.y, self.z)


@dataclass(frozen=True)
class Room:
    """Rectangular room; users sit on the horizontal receive plane."""

    width: float = DEFAULT_ROOM_WIDTH
    depth: float = DEFAULT_ROOM_DEPTH
    height: float = DEFAULT_ROOM_HEIGHT
    receive_plane_height: float = DEFAULT_PLANE_HEIGHT

    def __post_init__(self):
        _require_positive("room.width", self.width)
        _require_positive("room.depth", self.depth)
        _require_positive("room.height", self.height)
        if not (0 < self.receive_plane_height < self.height):
            raise ConfigError(
                "room.receive_plane_height must lie strictly between floor and "
                f"ceiling, got {self.receive_plane_height!r}"
            )

    @property
    def link_distance(self) -> float:
        """Vertical ceiling-to-receive-plane distance."""
        return self.height - self.receive_plane_height

    def contains_footprint(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.depth


@dataclass(frozen=True)
class ApSpec:
    """One ceiling-mounted access point, pointing straight down."""

    position: Vec3
    kind: ApKind = ApKind.VCSEL_ARRAY
    orientation: Vec3 = field(default=Vec3(0.0, 0.0, -1.0))

    def __post_init__(self):
        norm = math.sqrt(
            self.orientation.x**2 + self.orientation.y**2 + self.orientation.z**2
        )
        if abs(norm - 1.0) > 1e-9:
            raise ConfigError("ap.orientation must be unit length")
        if self.orientation.z >= 0:
            raise ConfigError("ap.orientation must point into the room (z < 0)")


@dataclass(frozen=True)
class VcselArrayParams:
    """One VCSEL micro-lens-array transmitter.

    Each of the n_elements lasers emits a Gaussian beam of waist
    beam_waist_w0, passes through its own thin micro-lens (focal length
    lens_focal_length at distance vcsel_to_lens), and the elements sit on a
    square grid of the given pitch. The refractive index is carried for
    reference only; the thin-lens model consumes the focal length directly.
    """

    n_elements: int = 25
    pitch: float = 10e-6
    beam_waist_w0: float = 5e-6
    wavelength: float = 1550e-9
    lens_focal_length: float = 0.127e-3
    vcsel_to_lens: float = 0.133e-3
    lens_refractive_index: float = 1.5
    optical_power_per_element: float = 10e-3
    electrical_power_per_element: float = 50e-3
    bandwidth_hz: float = 1.5e9
    rin_db_per_hz: float = -155.0

    def __post_init__(self):
        if self.n_elements < 1 or int(math.isqrt(self.n_elements)) ** 2 != self.n_elements:
            raise ConfigError(
                f"vcsel.n_elements must be a perfect square >= 1, got {self.n_elements!r}"
            )
        for name in (
            "pitch",
            "beam_waist_w0",
            "wavelength",
            "lens_focal_length",
            "vcsel_to_lens",
            "optical_power_per_element",
            "electrical_power_per_element",
            "bandwidth_hz",
        ):
            _require_positive(f"vcsel.{name}", getattr(self, name))
        if not (self.rin_db_per_hz < 0):
            raise ConfigError(
                f"vcsel.rin_db_per_hz must be < 0 (dB/Hz), got {self.rin_db_per_hz!r}"
            )

    @property
    def total_optical_power(self) -> float:
        return self.n_elements * self.optical_power_per_element

    @property
    def total_electrical_power(self) -> float:
        return self.n_elements * self.electrical_power_per_element


@dataclass(frozen=True)
class LedUnitParams:
    """One LED unit of co-located Lambertian emitters."""

    n_emitters: int = 4
    lambertian_order_m: float = 1.0
    optical_power_per_emitter: float = 1.0
    electrical_power_per_emitter: float = 3.0
    bandwidth_hz: float = 20e6

    def __post_init__(self):
        if self.n_emitters < 1:
            raise ConfigError(f"led.n_emitters must be >= 1, got {self.n_emitters!r}")
        if not (self.lambertian_order_m >= 1):
            raise ConfigError(
                f"led.lambertian_order_m must be >= 1, got {self.lambertian_order_m!r}"
            )
        _require_positive("led.optical_power_per_emitter", self.optical_power_per_emitter)
        _require_positive(
            "led.electrical_power_per_emitter", self.electrical_power_per_emitter
        )
        _require_positive("led.bandwidth_hz", self.bandwidth_hz)

    @property
    def total_optical_power(self) -> float:
        return self.n_emitters * self.optical_power_per_emitter

    @property
    def total_electrical_power(self) -> float:
        return self.n_emitters * self.electrical_power_per_emitter


@dataclass(frozen=True)
class ReceiverParams:
    """Photodetector front end: square-equivalent aperture plus TIA chain."""

    detector_area: float = DEFAULT_DETECTOR_AREA
    fov_half_angle: float = DEFAULT_FOV_HALF_ANGLE
    responsivity: float = DEFAULT_RESPONSIVITY_VCSEL
    load_resistance: float = 50.0
    tia_noise_figure_db: float = 5.0
    temperature_k: float = DEFAULT_TEMPERATURE_K
    background_current: float = DEFAULT_BACKGROUND_CURRENT

    def __post_init__(self):
        _require_positive("receiver.detector_area", self.detector_area)
        if not (0 < self.fov_half_angle <= math.pi / 2):
            raise ConfigError(
                f"receiver.fov_half_angle exceeds pi/2 or is non-positive, "
                f"got {self.fov_half_angle!r}"
            )
        _require_positive("receiver.responsivity", self.responsivity)
        _require_positive("receiver.load_resistance", self.load_resistance)
        _require_positive("receiver.temperature_k", self.temperature_k)
        _require_finite("receiver.tia_noise_figure_db", self.tia_noise_figure_db)
        if self.background_current < 0 or not math.isfinite(self.background_current):
            raise ConfigError(
                f"receiver.background_current must be >= 0, got {self.background_current!r}"
            )

    @property
    def half_side(self) -> float:
        """Half side of the square aperture with the configured area."""
        return math.sqrt(self.detector_area) / 2.0


@dataclass(frozen=True)
class Scenario:
    """Immutable description of one simulated configuration.

    The same AP positions serve both systems; the receivers differ only in
    responsivity (infrared photodiode for the laser system, visible-band one
    for the LED system) unless overridden. `users` holds the current user
    set; Monte Carlo drops swap it via `with_users`.
    """

    room: Room
    aps: tuple[ApSpec, ...]
    vcsel: VcselArrayParams
    led: LedUnitParams
    receiver_vcsel: ReceiverParams
    receiver_led: ReceiverParams
    users: tuple[Vec3, ...]
    fec_ber_limit: float = 1e-3
    rate_model: RateModel = RateModel.SHANNON
    include_signal_shot: bool = False

    def __post_init__(self):
        if len(self.aps) < 1:
            raise ConfigError("at least one AP is required")
        if len(self.users) < 1:
            raise ConfigError("at least one user is required")
        kinds = {ap.kind for ap in self.aps}
        if len(kinds) > 1:
            raise ConfigError("all APs in a scenario must share one kind")
        for i, ap in enumerate(self.aps):
            if abs(ap.position.z - self.room.height) > 1e-12:
                raise ConfigError(f"aps[{i}] must sit on the ceiling (z = room.height)")
            if not self.room.contains_footprint(ap.position.x, ap.position.y):
                raise ConfigError(f"aps[{i}] lies outside the room footprint")
        for i, u in enumerate(self.users):
            if not self.room.contains_footprint(u.x, u.y):
                raise ConfigError(f"users[{i}] lies outside the room footprint")
            if abs(u.z - self.room.receive_plane_height) > 1e-12:
                raise ConfigError(
                    f"users[{i}] must sit on the receive plane "
                    f"(z = {self.room.receive_plane_height})"
                )
        if not (0 < self.fec_ber_limit < 0.5):
            raise ConfigError(
                f"fec_ber_limit must lie in (0, 0.5), got {self.fec_ber_limit!r}"
            )

    def receiver_for(self, system: SystemKind) -> ReceiverParams:
        return self.receiver_vcsel if system is SystemKind.VCSEL else self.receiver_led

    def bandwidth_for(self, system: SystemKind) -> float:
        return self.vcsel.bandwidth_hz if system is SystemKind.VCSEL else self.led.bandwidth_hz

    def ap_total_optical_power(self, system: SystemKind) -> float:
        params = self.vcsel if system is SystemKind.VCSEL else self.led
        return params.total_optical_power

    def with_users(self, users) -> "Scenario":
        return replace(self, users=tuple(users))


def _grid_factors(n: int) -> tuple[int, int]:
    """Factor n as r*c with |r-c| minimal, r <= c."""
    r = int(math.isqrt(n))
    while n % r != 0:
        r -= 1
    return r, n // r


def default_ap_grid(room: Room, n_aps: int, kind: ApKind = ApKind.VCSEL_ARRAY) -> list[ApSpec]:
    """Cell-centered r x c ceiling grid; the smaller factor runs along x.

    With n_aps = 8 in a 5 x 5 room this yields 2 columns at x = 1.25, 3.75
    and 4 rows at y = 0.625 .. 4.375, matching the even-coverage layout used
    for the LED deployment.
    """
    if n_aps < 1:
        raise ConfigError(f"n_aps must be >= 1, got {n_aps!r}")
    r, c = _grid_factors(n_aps)
    xs = [room.width * (i + 0.5) / r for i in range(r)]
    ys = [room.depth * (j + 0.5) / c for j in range(c)]
    return [
        ApSpec(position=Vec3(x, y, room.height), kind=kind)
        for x in xs
        for y in ys
    ]


def place_users(room: Room, n_users: int, seed: int) -> list[Vec3]:
    """Drop n_users uniformly over the footprint at the receive-plane height.

    Positions come from a SplitMix64 stream (see `owcsim.rng`), drawing x
    then y per user in sequence, so a longer drop with the same seed extends
    a shorter one without disturbing its prefix.
    """
    if n_users < 1:
        raise ConfigError(f"n_users must be >= 1, got {n_users!r}")
    stream = SplitMix64(seed)
    z = room.receive_plane_height
    out = []
    for _ in range(n_users):
        x = stream.uniform(0.0, room.width)
        y = stream.uniform(0.0, room.depth)
        out.append(Vec3(x, y, z))
    return out


# Map of every config key to (type tag, default). The "system" section holds
# scenario-level knobs; positions use the receive plane / ceiling implicitly.
CONFIG_SCHEMA: dict[str, tuple[str, object]] = {
    "system.n_aps": ("int", DEFAULT_N_APS),
    "system.fec_ber_limit": ("float", 1e-3),
    "system.rate_model": ("rate_model", RateModel.SHANNON.value),
    "system.users": ("vec3_list", ()),
    "room.width": ("float", DEFAULT_ROOM_WIDTH),
    "room.depth": ("float", DEFAULT_ROOM_DEPTH),
    "room.height": ("float", DEFAULT_ROOM_HEIGHT),
    "room.receive_plane_height": ("float", DEFAULT_PLANE_HEIGHT),
    "vcsel.n_elements": ("int", 25),
    "vcsel.pitch": ("float", 10e-6),
    "vcsel.beam_waist_w0": ("float", 5e-6),
    "vcsel.wavelength": ("float", 1550e-9),
    "vcsel.lens_focal_length": ("float", 0.127e-3),
    "vcsel.vcsel_to_lens": ("float", 0.133e-3),
    "vcsel.lens_refractive_index": ("float", 1.5),
    "vcsel.optical_power_per_element": ("float", 10e-3),
    "vcsel.electrical_power_per_element": ("float", 50e-3),
    "vcsel.bandwidth_hz": ("float", 1.5e9),
    "vcsel.rin_db_per_hz": ("float", -155.0),
    "led.n_emitters": ("int", 4),
    "led.lambertian_order_m": ("float", 1.0),
    "led.optical_power_per_emitter": ("float", 1.0),
    "led.electrical_power_per_emitter": ("float", 3.0),
    "led.bandwidth_hz": ("float", 20e6),
    "receiver.detector_area": ("float", DEFAULT_DETECTOR_AREA),
    "receiver.fov_half_angle": ("float", DEFAULT_FOV_HALF_ANGLE),
    "receiver.responsivity": ("float", None),  # None: per-system default
    "receiver.load_resistance": ("float", 50.0),
    "receiver.tia_noise_figure_db": ("float", 5.0),
    "receiver.temperature_k": ("float", DEFAULT_TEMPERATURE_K),
    "receiver.background_current": ("float", DEFAULT_BACKGROUND_CURRENT),
    "noise.include_signal_shot": ("bool", False),
}


def validate_config(raw_config: dict) -> Scenario:
    """Build a validated Scenario from a parsed key-value map.

    Every key absent from the map takes its documented default; unknown keys
    must already have been rejected by the parser. Errors name the offending
    key (and user index where applicable).
    """
    unknown = [k for k in raw_config if k not in CONFIG_SCHEMA and not k.startswith("run.")]
    if unknown:
        raise ConfigError(f"unknown config key {unknown[0]!r}")

    def get(key: str):
        if key in raw_config:
            return raw_config[key]
        return CONFIG_SCHEMA[key][1]

    room = Room(
        width=float(get("room.width")),
        depth=float(get("room.depth")),
        height=float(get("room.height")),
        receive_plane_height=float(get("room.receive_plane_height")),
    )
    vcsel = VcselArrayParams(
        n_elements=int(get("vcsel.n_elements")),
        pitch=float(get("vcsel.pitch")),
        beam_waist_w0=float(get("vcsel.beam_waist_w0")),
        wavelength=float(get("vcsel.wavelength")),
        lens_focal_length=float(get("vcsel.lens_focal_length")),
        vcsel_to_lens=float(get("vcsel.vcsel_to_lens")),
        lens_refractive_index=float(get("vcsel.lens_refractive_index")),
        optical_power_per_element=float(get("vcsel.optical_power_per_element")),
        electrical_power_per_element=float(get("vcsel.electrical_power_per_element")),
        bandwidth_hz=float(get("vcsel.bandwidth_hz")),
        rin_db_per_hz=float(get("vcsel.rin_db_per_hz")),
    )
    led = LedUnitParams(
        n_emitters=int(get("led.n_emitters")),
        lambertian_order_m=float(get("led.lambertian_order_m")),
        optical_power_per_emitter=float(get("led.optical_power_per_emitter")),
        electrical_power_per_emitter=float(get("led.electrical_power_per_emitter")),
        bandwidth_hz=float(get("led.bandwidth_hz")),
    )

    common = dict(
        detector_area=float(get("receiver.detector_area")),
        fov_half_angle=float(get("receiver.fov_half_angle")),
        load_resistance=float(get("receiver.load_resistance")),
        tia_noise_figure_db=float(get("receiver.tia_noise_figure_db")),
        temperature_k=float(get("receiver.temperature_k")),
        background_current=float(get("receiver.background_current")),
    )
    responsivity = get("receiver.responsivity")
    recv_v = ReceiverParams(
        responsivity=float(responsivity) if responsivity is not None else DEFAULT_RESPONSIVITY_VCSEL,
        **common,
    )
    recv_l = ReceiverParams(
        responsivity=float(responsivity) if responsivity is not None else DEFAULT_RESPONSIVITY_LED,
        **common,
    )

    aps = tuple(default_ap_grid(room, int(get("system.n_aps"))))

    raw_users = get("system.users")
    if raw_users:
        # (x, y) pairs; z is always the receive plane height.
        users = []
        for i, (x, y) in enumerate(raw_users):
            if not room.contains_footprint(x, y):
                raise ConfigError(f"system.users[{i}] lies outside the room footprint")
            users.append(Vec3(x, y, room.receive_plane_height))
        users = tuple(users)
    else:
        users = (
            Vec3(room.width / 2.0, room.depth / 2.0, room.receive_plane_height),
        )

    rate_model = RateModel(str(get("system.rate_model")))
    return Scenario(
        room=room,
        aps=aps,
        vcsel=vcsel,
        led=led,
        receiver_vcsel=recv_v,
        receiver_led=recv_l,
        users=users,
        fec_ber_limit=float(get("system.fec_ber_limit")),
        rate_model=rate_model,
        include_signal_shot=bool(get("noise.include_signal_shot")),
    )
