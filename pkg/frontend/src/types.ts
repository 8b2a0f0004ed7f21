/** Response shapes of the ppmchart HTTP API (schema ppmchart.*/1). */

export interface DotDoc {
  timestamp: number;
  kind: string;
  color_key: string;
  x: number | null;
  out_of_window: boolean;
}

export interface TimelineDoc {
  element_id: string;
  element_type: string;
  first_op: number;
  deleted: boolean;
  sort_value: number | null;
  dots: DotDoc[];
}

export interface ChartDoc {
  schema: string;
  session_id: string;
  config: {
    sort: string;
    window_seconds: number;
    width: number;
    hide_types: string[];
    hide_ops: string[];
    hide_kinds: string[];
    hide_elements_with: string[];
  };
  window: { t_start_ms: number; t_end_ms: number; seconds: number };
  timelines: TimelineDoc[];
  overview_timelines: TimelineDoc[];
}

export interface NodeDoc {
  id: string;
  element_type: string;
  x: number | null;
  y: number | null;
  label: string | null;
  alive: boolean;
}

export interface EdgeDoc {
  id: string;
  source: string | null;
  target: string | null;
  bendpoints: [number, number][];
  label: string | null;
  label_position: [number, number] | null;
  alive: boolean;
}

export interface ModelDoc {
  schema: string;
  nodes: NodeDoc[];
  edges: EdgeDoc[];
  applied_count: number;
  skipped_count: number;
  alive_count: number;
}

export interface PatternsDoc {
  schema: string;
  session_id: string;
  metrics: {
    created_element_count: number;
    final_alive_count: number;
    deleted_count: number;
    total_event_count: number;
    duration_seconds: number;
    class_event_counts: Record<string, number>;
  };
}

export interface SessionListDoc {
  sessions: { id: string; event_count: number; source_format: string }[];
}

export const SORTS = [
  "first_event",
  "distance_from_start",
  "create_order_from_start",
] as const;
export type SortChoice = (typeof SORTS)[number];

export const ELEMENT_TYPES = [
  "start_event",
  "end_event",
  "activity",
  "xor_gateway",
  "and_gateway",
  "edge",
] as const;

export const OPERATION_CLASSES = ["create", "move", "delete", "name"] as const;

export const OPERATION_KINDS = [
  "create_start_event",
  "create_end_event",
  "create_activity",
  "create_xor",
  "create_and",
  "create_edge",
  "reconnect_edge",
  "move_start_event",
  "move_end_event",
  "move_activity",
  "move_xor",
  "move_and",
  "move_edge_label",
  "create_edge_bendpoint",
  "move_edge_bendpoint",
  "delete_edge_bendpoint",
  "delete_start_event",
  "delete_end_event",
  "delete_activity",
  "delete_xor",
  "delete_and",
  "delete_edge",
  "name_activity",
  "rename_activity",
  "name_edge",
  "rename_edge",
] as const;
