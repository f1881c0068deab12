// Payload types mirroring the profile service API.

export interface LineupEntry {
  player: string;
  role: string;
}

export type MovementTotals = Record<string, number>;

export interface CompareResponse {
  totals_a: MovementTotals;
  totals_b: MovementTotals;
  deltas: MovementTotals;
}

export interface RosterEntry {
  player: string;
  role: string;
  minutes_total: number;
  qualified: boolean;
}

export interface TemplateSlot {
  label: string;
  role: string;
  side: string;
  x: number;
  y: number;
}

export interface Template {
  name: string;
  slots: TemplateSlot[];
}

export interface ServedConfig {
  movement_types: string[];
  roles: string[];
  pitch: { length: number; width: number };
  templates: Template[];
}

// Flat profile record; mt_<type>_per30 and pct_<type> fields mirror the CSV columns.
export interface Profile {
  player: string;
  role: string;
  qualified: boolean;
  minutes_total: number;
  [field: string]: string | number | boolean | null;
}

export interface CompareGap {
  player: string;
  role: string;
  reason: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public gaps: CompareGap[] = [],
  ) {
    super(message);
  }
}

export class OfflineError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
  }
}
