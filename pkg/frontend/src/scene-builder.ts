// Translate a scene3dviz-1 payload into a three.js object graph.  Pure
// geometry only: captions and face labels are recorded as userData and
// painted later by labels.ts, so this module runs headless (tests, SSR).

import * as THREE from 'three'
import type { BackdropPayload, LanePayload, ScenePayload, Triple } from './types.js'
import { SCENE_SCHEMA, isNodeElement } from './types.js'

export class PayloadError extends Error {}

export interface BuiltScene {
  root: THREE.Group
  /** Meshes carrying userData.pickId, for raycast hit-testing. */
  pickables: THREE.Mesh[]
  /** Objects whose userData asks for painted text (labels, captions). */
  captioned: THREE.Object3D[]
}

const NODE_COLORS: Record<string, number> = {
  task: 0x4f7dc3,
  start: 0x5aa45a,
  end: 0xb05555,
  'parallel-split': 0xc9a227,
  'parallel-join': 0xc9a227,
  'xor-split': 0xc98a27,
  'xor-join': 0xc98a27,
  'loop-head': 0x8a63b8,
  'loop-tail': 0x8a63b8,
}

const EDGE_COLOR = 0x9aa0a6
const LANE_COLORS = [0x3a6ea5, 0x6ea53a, 0xa53a6e, 0xa5883a, 0x3aa58f, 0x7a3aa5]

function vec(t: Triple): THREE.Vector3 {
  return new THREE.Vector3(t[0], t[1], t[2])
}

function nodeGeometry(shape: string): THREE.BufferGeometry {
  switch (shape) {
    case 'cube':
      return new THREE.BoxGeometry(1, 1, 1)
    case 'sphere':
      return new THREE.SphereGeometry(0.5, 24, 16)
    case 'bar':
      return new THREE.BoxGeometry(0.22, 1, 1)
    case 'diamond':
      return new THREE.OctahedronGeometry(0.5)
    default:
      throw new PayloadError(`unknown node shape ${shape}`)
  }
}

function buildNode(element: Extract<ScenePayload['elements'][number], { pick_id: string }>): THREE.Mesh {
  const material = new THREE.MeshLambertMaterial({
    color: NODE_COLORS[element.kind_tag] ?? 0x888888,
  })
  const mesh = new THREE.Mesh(nodeGeometry(element.shape), material)
  mesh.position.copy(vec(element.position))
  mesh.scale.copy(vec(element.scale))
  mesh.userData.pickId = element.pick_id
  mesh.userData.kindTag = element.kind_tag
  mesh.userData.labels = element.labels
  return mesh
}

function buildConnector(path: Triple[]): THREE.Group {
  const group = new THREE.Group()
  const points = path.map(vec)
  const line = new THREE.Line(
    new THREE.BufferGeometry().setFromPoints(points),
    new THREE.LineBasicMaterial({ color: EDGE_COLOR }),
  )
  group.add(line)

  // Arrowhead: a small cone aligned with the final segment.
  const tip = points[points.length - 1]
  const prev = points[points.length - 2]
  const direction = tip.clone().sub(prev).normalize()
  const cone = new THREE.Mesh(
    new THREE.ConeGeometry(0.06, 0.18, 10),
    new THREE.MeshBasicMaterial({ color: EDGE_COLOR }),
  )
  cone.position.copy(tip.clone().addScaledVector(direction, -0.09))
  cone.quaternion.setFromUnitVectors(new THREE.Vector3(0, 1, 0), direction)
  group.add(cone)
  group.userData.kindTag = 'edge'
  return group
}

function buildLane(lane: LanePayload): THREE.Mesh {
  const spanX = lane.span_x[1] - lane.span_x[0]
  const spanOther = lane.span_other[1] - lane.span_other[0]
  const material = new THREE.MeshBasicMaterial({
    color: LANE_COLORS[lane.index % LANE_COLORS.length],
    transparent: true,
    opacity: 0.14,
    side: THREE.DoubleSide,
    depthWrite: false,
  })
  const mesh = new THREE.Mesh(new THREE.PlaneGeometry(spanX, spanOther), material)
  const midX = (lane.span_x[0] + lane.span_x[1]) / 2
  const midOther = (lane.span_other[0] + lane.span_other[1]) / 2
  if (lane.style === 'positionY') {
    // Horizontal band at a height: plane lies in XZ.
    mesh.rotation.x = -Math.PI / 2
    mesh.position.set(midX, lane.axis_value, midOther)
  } else {
    // Depth band: plane lies in XY.
    mesh.position.set(midX, midOther, lane.axis_value)
  }
  mesh.userData.lane = lane
  mesh.userData.caption = lane.label
  return mesh
}

function buildBackdrop(backdrop: BackdropPayload): THREE.Group {
  const group = new THREE.Group()
  const size = Math.max(backdrop.max[0] - backdrop.min[0], backdrop.max[2] - backdrop.min[2])
  const grid = new THREE.GridHelper(size, Math.max(4, Math.round(size)), 0x555555, 0x333333)
  grid.position.set(
    (backdrop.min[0] + backdrop.max[0]) / 2,
    backdrop.min[1],
    (backdrop.min[2] + backdrop.max[2]) / 2,
  )
  group.add(grid)
  if (backdrop.kind === 'room') {
    const wall = new THREE.MeshBasicMaterial({
      color: 0x20242c,
      side: THREE.DoubleSide,
      transparent: true,
      opacity: 0.5,
    })
    const height = backdrop.max[1] - backdrop.min[1]
    const back = new THREE.Mesh(
      new THREE.PlaneGeometry(backdrop.max[0] - backdrop.min[0], height),
      wall,
    )
    back.position.set(
      (backdrop.min[0] + backdrop.max[0]) / 2,
      backdrop.min[1] + height / 2,
      backdrop.min[2],
    )
    group.add(back)
    const side = new THREE.Mesh(
      new THREE.PlaneGeometry(backdrop.max[2] - backdrop.min[2], height),
      wall,
    )
    side.rotation.y = Math.PI / 2
    side.position.set(
      backdrop.min[0],
      backdrop.min[1] + height / 2,
      (backdrop.min[2] + backdrop.max[2]) / 2,
    )
    group.add(side)

    // Two tables along the back wall, proportioned to the room, purely
    // for scale and orientation cues.
    const width = backdrop.max[0] - backdrop.min[0]
    const depth = backdrop.max[2] - backdrop.min[2]
    const tableMaterial = new THREE.MeshLambertMaterial({ color: 0x3a3f48 })
    for (const anchor of [0.28, 0.72]) {
      const table = new THREE.Mesh(
        new THREE.BoxGeometry(width * 0.2, height * 0.12, depth * 0.16),
        tableMaterial,
      )
      table.position.set(
        backdrop.min[0] + width * anchor,
        backdrop.min[1] + height * 0.06,
        backdrop.min[2] + depth * 0.15,
      )
      group.add(table)
    }
  }
  group.userData.kindTag = 'backdrop'
  return group
}

function buildLegend(legend: NonNullable<ScenePayload['legend']>): THREE.Group {
  const group = new THREE.Group()
  const axes = new THREE.AxesHelper(1)
  group.add(axes)
  group.position.copy(vec(legend.position))
  group.userData.legendAxes = legend.axes
  group.userData.caption = Object.entries(legend.axes)
    .map(([axis, attribute]) => `${axis}: ${attribute}`)
    .join('\n')
  return group
}

/**
 * Build the full object graph for one payload.  Throws PayloadError on a
 * wrong schema tag or malformed elements so callers can keep the previous
 * view and surface the message inline.
 */
export function buildScene(payload: ScenePayload): BuiltScene {
  if (payload.schema !== SCENE_SCHEMA) {
    throw new PayloadError(`expected schema ${SCENE_SCHEMA}, got ${String(payload.schema)}`)
  }
  const root = new THREE.Group()
  root.name = payload.name
  const pickables: THREE.Mesh[] = []
  const captioned: THREE.Object3D[] = []

  for (const element of payload.elements) {
    if (isNodeElement(element)) {
      const mesh = buildNode(element)
      pickables.push(mesh)
      if (Object.keys(element.labels).length > 0) captioned.push(mesh)
      root.add(mesh)
    } else {
      if (element.path.length < 2) {
        throw new PayloadError(`connector ${element.from}->${element.to} has a short path`)
      }
      root.add(buildConnector(element.path))
    }
  }

  for (const lane of payload.lanes) {
    const plane = buildLane(lane)
    captioned.push(plane)
    root.add(plane)
  }

  if (payload.legend) {
    const legend = buildLegend(payload.legend)
    captioned.push(legend)
    root.add(legend)
  }
  if (payload.backdrop) root.add(buildBackdrop(payload.backdrop))

  return { root, pickables, captioned }
}

/** Lane planes in the built graph, in payload order. */
export function lanePlanes(built: BuiltScene): THREE.Mesh[] {
  const out: THREE.Mesh[] = []
  built.root.traverse((object) => {
    if (object.userData.lane) out.push(object as THREE.Mesh)
  })
  return out.sort((a, b) => {
    const la = a.userData.lane as LanePayload
    const lb = b.userData.lane as LanePayload
    return la.style === lb.style ? la.index - lb.index : la.style < lb.style ? -1 : 1
  })
}
