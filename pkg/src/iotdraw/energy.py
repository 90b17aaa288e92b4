"""First-order energy accounting for battery-powered devices.

Sensing cost is the supply voltage times the sense current over the
sense duration, scaled by the packet size in kilobits; transmission cost
is the radio-electronics energy per bit plus the amplifier energy per
bit scaled by distance to the path-loss exponent.  All inputs keep their
customary units (kb, V, mA, ms, nJ/bit, pJ/bit/m^n) and are converted to
SI inline, so every figure in a profile reads exactly like a datasheet.

Battery charge is tracked in mAh.  Joules convert through watt-hours
using the rounded constant 0.000277778 Wh/J; the rounding is kept
deliberately so that results line up digit-for-digit with hand
calculations done with the same constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import DeviceEnergyProfile, ModelError

WH_PER_JOULE = 0.000277778


@dataclass(frozen=True)
class EnergyAmount:
    joules: float

    def __post_init__(self):
        if self.joules < 0:
            raise ModelError(f"energy cannot be negative: {self.joules}")

    def __add__(self, other: "EnergyAmount") -> "EnergyAmount":
        return EnergyAmount(self.joules + other.joules)


@dataclass(frozen=True)
class BatteryState:
    residual_mah: float
    depleted: bool


def sense_energy(profile: DeviceEnergyProfile) -> EnergyAmount:
    """Energy in joules for one sensing operation of ``packet_kb`` kilobits."""
    joules = (profile.packet_kb
              * profile.supply_voltage_v
              * (profile.sense_current_ma * 1e-3)
              * (profile.sense_duration_ms * 1e-3))
    return EnergyAmount(joules)


def transmit_energy(profile: DeviceEnergyProfile, distance_m: float) -> EnergyAmount:
    """Energy in joules to radio one packet over ``distance_m`` meters."""
    if distance_m <= 0:
        raise ModelError(f"transmit distance must be positive: {distance_m}")
    bits = profile.packet_kb * 1000.0
    joules = (bits * (profile.e_elec_nj_per_bit * 1e-9)
              + bits * distance_m ** profile.loss_exponent_n * (profile.e_amp_pj_per_bit_m * 1e-12))
    return EnergyAmount(joules)


def joules_to_mah(energy: EnergyAmount, voltage_v: float) -> float:
    """Convert joules to milliamp-hours at the given supply voltage."""
    if voltage_v <= 0:
        raise ModelError(f"voltage must be positive: {voltage_v}")
    return 1000.0 * (energy.joules * WH_PER_JOULE) / voltage_v


def drain(state: BatteryState, profile: DeviceEnergyProfile, energy: EnergyAmount) -> BatteryState:
    """Subtract one expenditure from the battery, clamping at empty.

    The device counts as depleted once the residual charge falls to the
    profile's depletion threshold or below; from then on its service is
    considered unavailable.
    """
    residual = max(0.0, state.residual_mah - joules_to_mah(energy, profile.supply_voltage_v))
    return BatteryState(residual, residual <= profile.depletion_threshold_mah)


def initial_battery(profile: DeviceEnergyProfile) -> BatteryState:
    residual = profile.residual_energy_mah
    return BatteryState(residual, residual <= profile.depletion_threshold_mah)


def per_request_drain_mah(profile: DeviceEnergyProfile, distance_m: float) -> float:
    """Charge consumed by one full request: sense once, transmit once."""
    total = sense_energy(profile) + transmit_energy(profile, distance_m)
    return joules_to_mah(total, profile.supply_voltage_v)


def lifetime_closed_form(profile: DeviceEnergyProfile, distance_m: float,
                         interval_ticks: int) -> int | None:
    """Predicted ticks until depletion for one request every ``interval_ticks``.

    Counts how many whole requests fit into the charge budget above the
    depletion threshold, then scales by the request interval.  Returns
    None when a request costs nothing, since the lifetime is unbounded
    then.  A simulated run lands within one interval of this figure.
    """
    if interval_ticks < 1:
        raise ModelError(f"interval must be at least 1 tick: {interval_ticks}")
    per_request = per_request_drain_mah(profile, distance_m)
    if per_request <= 0.0:
        return None
    budget = profile.residual_energy_mah - profile.depletion_threshold_mah
    return interval_ticks * math.floor(budget / per_request)
