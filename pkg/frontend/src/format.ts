// Display formatting.  Benefits are consumer-facing and round to the nearest
// $1,000; rates and probabilities keep enough digits to be meaningful.

export function dollars(x: number): string {
  const rounded = Math.round(x);
  const sign = rounded < 0 ? "-" : "";
  return `${sign}$${Math.abs(rounded).toLocaleString("en-US")}`;
}

export function benefitDollars(x: number): string {
  return dollars(Math.round(x / 1000) * 1000);
}

export function units(x: number, digits = 3): string {
  return `${x.toFixed(digits)} units`;
}

export function money(valueUnits: number, valueDollars: number, mode: "dollars" | "units"): string {
  return mode === "dollars" ? dollars(valueDollars) : units(valueUnits);
}

export function benefit(valueUnits: number, valueDollars: number, mode: "dollars" | "units"): string {
  return mode === "dollars" ? benefitDollars(valueDollars) : units(valueUnits, 2);
}

export function signedMoney(valueUnits: number, valueDollars: number, mode: "dollars" | "units"): string {
  const text = money(Math.abs(valueUnits), Math.abs(valueDollars), mode);
  const negative = (mode === "dollars" ? valueDollars : valueUnits) < 0;
  return negative ? `-${text}` : `+${text}`;
}

export function riskAversion(alpha: number): string {
  return alpha.toFixed(2);
}

export function rate(x: number, digits = 4): string {
  return x.toFixed(digits);
}

export function probability(p: number): string {
  if (p === 0) return "0";
  if (p < 1e-4) return p.toExponential(2);
  return `${(100 * p).toFixed(3)}%`;
}

export function percentDelta(p: number): string {
  const sign = p >= 0 ? "+" : "";
  return `${sign}${(100 * p).toFixed(2)}pp`;
}
