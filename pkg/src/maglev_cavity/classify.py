"""Rule-based classification of levitation events from frequency shifts.

Thresholds (Hz) follow the magnitudes seen in field simulations of the cavity:
placing a magnet on the stub pulls the resonance down by at least ~50 MHz,
a 10 degree tilt in contact shifts it by ~30 MHz, and lifting the magnet off
the stub always moves the resonance back up toward the bare value.
"""

from dataclasses import dataclass

PLACED_ON_STUB = "placed_on_stub"
LIFT_OFF = "lift_off"
SLIDING_TO_EDGE = "sliding_to_edge"
TILT_ON_SURFACE = "tilt_on_surface"
ROTATION = "rotation"
FELL_TO_BOTTOM = "fell_to_bottom"
NO_EVENT = "no_event"

LABELS = (PLACED_ON_STUB, LIFT_OFF, SLIDING_TO_EDGE, TILT_ON_SURFACE,
          ROTATION, FELL_TO_BOTTOM, NO_EVENT)
CONTEXTS = ("on_stub", "on_bottom")


@dataclass(frozen=True)
class Thresholds:
    place: float = 50e6
    tilt: float = 30e6
    noise: float = 5e6
    up: float = 10e6

    def scaled(self, factor):
        return Thresholds(self.place * factor, self.tilt * factor,
                          self.noise * factor, self.up * factor)


DEFAULT_THRESHOLDS = Thresholds()


def classify_event(f_bare, f_before, f_after, context="on_stub", contact=None,
                   thresholds=DEFAULT_THRESHOLDS):
    """Label the change ``f_before -> f_after`` of the cavity resonance.

    ``contact`` says whether the magnet is known to stay on the surface
    (``True``), known to be lifting (``False``) or unknown (``None``). With
    contact unknown, an upshift toward ``f_bare`` is read as lift-off.
    Total: every input combination maps to a label.
    """
    t = thresholds
    delta = f_after - f_before
    if abs(delta) < t.noise:
        return NO_EVENT

    if context == "on_bottom":
        if delta > 0:
            return FELL_TO_BOTTOM
        if f_after <= f_bare - t.place:
            return PLACED_ON_STUB
        return NO_EVENT

    # Magnet arriving on the stub from an (almost) unperturbed cavity.
    if abs(f_before - f_bare) < t.noise and f_after <= f_bare - t.place:
        return PLACED_ON_STUB

    toward_bare = abs(f_after - f_bare) < abs(f_before - f_bare)
    if contact is not True and delta > t.up and toward_bare:
        return LIFT_OFF
    return SLIDING_TO_EDGE if abs(delta) > t.tilt else TILT_ON_SURFACE


def classify_series(f_bare, series, thresholds=DEFAULT_THRESHOLDS, **kwargs):
    """Label a time series of resonance frequencies.

    A dip deeper than the tilt threshold that comes back to within the noise
    threshold of its starting value is the double-well signature of the
    magnet rotating in place. Anything else falls back to
    :func:`classify_event` on the first and last samples.
    """
    series = [float(f) for f in series]
    if len(series) < 2:
        return NO_EVENT
    start, end = series[0], series[-1]
    lowest = min(series)
    if (start - lowest > thresholds.tilt and abs(end - start) < thresholds.noise
            and series.index(lowest) not in (0, len(series) - 1)):
        return ROTATION
    return classify_event(f_bare, start, end, thresholds=thresholds, **kwargs)
