// Payload types mirroring the service API (docs/service.md) and the
// scene3dviz-1 format (docs/scene-format.md).  The viewer performs no
// mapping math: every visual quantity comes from these payloads.

export type Triple = [number, number, number]

export interface NodeElement {
  shape: 'cube' | 'sphere' | 'bar' | 'diamond'
  kind_tag: string
  position: Triple
  scale: Triple
  labels: Record<string, string>
  pick_id: string
}

export interface ConnectorElement {
  shape: 'arrow-bar'
  kind_tag: string
  path: Triple[]
  from: string
  to: string
}

export type SceneElement = NodeElement | ConnectorElement

export function isNodeElement(e: SceneElement): e is NodeElement {
  return 'pick_id' in e
}

export interface LanePayload {
  style: 'positionY' | 'positionZ'
  index: number
  label: string
  axis_value: number
  span_x: [number, number]
  span_other: [number, number]
}

export interface LegendPayload {
  axes: Partial<Record<'x' | 'y' | 'z', string>>
  position: Triple
}

export interface BackdropPayload {
  kind: 'grid' | 'room'
  min: Triple
  max: Triple
}

export interface CameraHint {
  eye: Triple
  target: Triple
}

export interface ScenePayload {
  schema: string
  name: string
  elements: SceneElement[]
  lanes: LanePayload[]
  legend: LegendPayload | null
  backdrop: BackdropPayload | null
  camera_hint: CameraHint
  bounds: { min: Triple; max: Triple }
}

export const SCENE_SCHEMA = 'scene3dviz-1'

export interface AttributeSummary {
  name: string
  kind: 'numeric' | 'text' | 'mixed'
  carriers: number
}

export interface ModelSummary {
  name: string
  nodes: number
  tasks: number
  attributes: AttributeSummary[]
}

export interface UploadResponse {
  model_id: string
  summary: ModelSummary
  warnings: { line: number | null; message: string }[]
}

export interface CardArgument {
  name: string
  kind: 'numeric' | 'text'
  text: string
  value: number | null
  unit: string | null
}

export interface DetailCard {
  node_id: string
  kind: string
  label: string
  arguments: CardArgument[]
}

export interface GenerateRequest {
  nodes: number
  control_flow_elements?: number
  arguments?: number
  seed?: number
}

export type Backdrop = 'none' | 'grid' | 'room'

export type StyleName =
  | 'positionY' | 'positionZ'
  | 'scaleX' | 'scaleY' | 'scaleZ'
  | 'labelFront' | 'labelBack' | 'labelLeft' | 'labelRight' | 'labelTop' | 'labelBottom'

export type MappingName = 'direct' | 'relative' | 'discrete'

/** One row of the configuration panel: (visual style, attribute, mapping). */
export interface ConfigRow {
  style: StyleName
  attribute: string
  mapping: MappingName
  laneCount?: number
}

export interface ViewerState {
  modelId: string | null
  summary: ModelSummary | null
  rows: ConfigRow[]
  backdrop: Backdrop
  selectedNode: string | null
}
